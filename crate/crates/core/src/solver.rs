//! Pseudo-spectral RK4 integrators for 3D incompressible Euler (velocity form,
//! pressure removed by Leray projection) and 2D SQG (conservative form), with
//! 2/3-rule dealiasing and a conservation log.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conservation::sqg_helicity;
use crate::error::{Error, Result};
use crate::fields::{
    divergence, forward_real, inverse_real, FieldLike, Grid, ScalarField, TimeSeries, VectorField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Euler3d,
    Sqg2d,
}

impl System {
    pub fn dim(&self) -> usize {
        match self {
            System::Euler3d => 3,
            System::Sqg2d => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: Grid,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub system: System,
}

impl SolverConfig {
    pub fn new(
        grid: Grid,
        dt: f64,
        t_end: f64,
        record_every: usize,
        system: System,
    ) -> Result<Self> {
        let cfg = SolverConfig {
            grid,
            dt,
            t_end,
            record_every,
            system,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::arg(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::arg(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::arg("record_every must be at least 1"));
        }
        if self.grid.dim() != self.system.dim() {
            return Err(Error::arg(format!(
                "{:?} runs in dimension {}, grid has dimension {}",
                self.system,
                self.system.dim(),
                self.grid.dim()
            )));
        }
        let steps = self.t_end / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::arg(format!(
                "t_end = {} is not a whole number of steps dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// `dt · max|v| / h`.
    pub fn cfl(&self, max_speed: f64) -> f64 {
        self.dt * max_speed / self.grid.spacing()
    }
}

/// Whether a mode survives the 2/3 rule: `3|k_a| < n` on every axis.
pub fn dealias_keep(grid: Grid, flat: usize) -> bool {
    let n = grid.points_per_axis() as i64;
    grid.wavevector(flat).iter().all(|k| 3 * k.abs() < n)
}

pub fn dealias(f: &ScalarField) -> ScalarField {
    let g = f.grid();
    let mut c = f.coefficients().into_owned();
    for (i, z) in c.iter_mut().enumerate() {
        if !dealias_keep(g, i) {
            *z = Complex64::default();
        }
    }
    ScalarField::spectral_unchecked(g, c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationRecord {
    pub step: usize,
    pub t: f64,
    /// `½‖v‖²` (Euler) or `½‖θ‖²` (SQG).
    pub energy: f64,
    /// `∫ω·v` (Euler).
    pub helicity: Option<f64>,
    /// `max |div v|` (Euler).
    pub max_divergence: Option<f64>,
    /// `‖θ‖_{L²}` (SQG).
    pub l2: Option<f64>,
    /// `½∫θ(−Δ)^{−1/2}θ` (SQG).
    pub hamiltonian: Option<f64>,
    /// `∫θ∂_iθ` for `i = 1, 2` (SQG).
    pub theta_helicity: Option<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub struct SolverRun<T> {
    pub config: SolverConfig,
    pub series: TimeSeries<T>,
    pub log: Vec<ConservationRecord>,
    /// CFL number of the initial state.
    pub cfl: f64,
}

impl<T> SolverRun<T> {
    /// Largest `|q(t) − q(0)| / |q(0)|` of a logged quantity.
    pub fn relative_drift(&self, q: impl Fn(&ConservationRecord) -> f64) -> f64 {
        let q0 = q(&self.log[0]);
        self.log
            .iter()
            .map(|r| (q(r) - q0).abs())
            .fold(0.0, f64::max)
            / q0.abs()
    }
}

type Coeffs = Vec<Complex64>;

struct Spectral {
    grid: Grid,
    dims: Vec<usize>,
    keep: Vec<bool>,
    /// Derivative wavevector per mode.
    xi: Vec<[f64; 3]>,
}

impl Spectral {
    fn new(grid: Grid) -> Spectral {
        let dims = vec![grid.points_per_axis(); grid.dim()];
        let keep = (0..grid.len()).map(|i| dealias_keep(grid, i)).collect();
        let xi = (0..grid.len())
            .map(|i| grid.derivative_wavevector(i))
            .collect();
        Spectral {
            grid,
            dims,
            keep,
            xi,
        }
    }

    fn to_physical(&self, c: &[Complex64]) -> Vec<f64> {
        inverse_real(c, &self.dims).0
    }

    fn to_spectral(&self, v: &[f64]) -> Coeffs {
        let mut c = forward_real(v, &self.dims);
        self.mask(&mut c);
        c
    }

    fn mask(&self, c: &mut [Complex64]) {
        for (z, k) in c.iter_mut().zip(&self.keep) {
            if !k {
                *z = Complex64::default();
            }
        }
    }

    fn derivative(&self, c: &[Complex64], axis: usize) -> Coeffs {
        c.iter()
            .zip(&self.xi)
            .map(|(z, x)| z * Complex64::new(0.0, x[axis]))
            .collect()
    }
}

fn check_finite(state: &[Coeffs], step: usize, t_prev: f64) -> Result<()> {
    if state
        .iter()
        .flatten()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::NumericalAbort {
            step,
            last_finite_time: t_prev,
        });
    }
    Ok(())
}

fn rk4(state: &[Coeffs], dt: f64, rhs: &impl Fn(&[Coeffs]) -> Vec<Coeffs>) -> Vec<Coeffs> {
    let axpy = |a: &[Coeffs], k: &[Coeffs], h: f64| -> Vec<Coeffs> {
        a.iter()
            .zip(k)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q * h).collect())
            .collect()
    };
    let k1 = rhs(state);
    let k2 = rhs(&axpy(state, &k1, 0.5 * dt));
    let k3 = rhs(&axpy(state, &k2, 0.5 * dt));
    let k4 = rhs(&axpy(state, &k3, dt));
    state
        .iter()
        .enumerate()
        .map(|(c, s)| {
            (0..s.len())
                .map(|i| {
                    s[i] + (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]) * (dt / 6.0)
                })
                .collect()
        })
        .collect()
}

fn euler_rhs(sp: &Spectral, v: &[Coeffs]) -> Vec<Coeffs> {
    let n = sp.grid.len();
    let u: Vec<Vec<f64>> = v.iter().map(|c| sp.to_physical(c)).collect();
    let mut out = Vec::with_capacity(3);
    for vi in v {
        let mut adv = vec![0.0; n];
        for (j, uj) in u.iter().enumerate() {
            let g = sp.to_physical(&sp.derivative(vi, j));
            for p in 0..n {
                adv[p] += uj[p] * g[p];
            }
        }
        out.push(sp.to_spectral(&adv));
    }
    for k in 0..n {
        let x = sp.xi[k];
        let x2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let dot = if x2 > 0.0 {
            (out[0][k] * x[0] + out[1][k] * x[1] + out[2][k] * x[2]) / x2
        } else {
            Complex64::default()
        };
        for (a, o) in out.iter_mut().enumerate() {
            o[k] = -(o[k] - dot * x[a]);
        }
    }
    out
}

fn sqg_rhs(sp: &Spectral, th: &[Coeffs]) -> Vec<Coeffs> {
    let n = sp.grid.len();
    let t = &th[0];
    let mut v1 = vec![Complex64::default(); n];
    let mut v2 = vec![Complex64::default(); n];
    for k in 0..n {
        let k2 = sp.grid.wavenumber_sq(k);
        if k2 == 0 {
            continue;
        }
        let m = (k2 as f64).sqrt();
        // v = (−𝓡₂θ, 𝓡₁θ), 𝓡_j = −iξ_j/|ξ|.
        v1[k] = t[k] * Complex64::new(0.0, sp.xi[k][1] / m);
        v2[k] = t[k] * Complex64::new(0.0, -sp.xi[k][0] / m);
    }
    let tp = sp.to_physical(t);
    let f1: Vec<f64> = sp
        .to_physical(&v1)
        .iter()
        .zip(&tp)
        .map(|(a, b)| a * b)
        .collect();
    let f2: Vec<f64> = sp
        .to_physical(&v2)
        .iter()
        .zip(&tp)
        .map(|(a, b)| a * b)
        .collect();
    let (f1, f2) = (sp.to_spectral(&f1), sp.to_spectral(&f2));
    let out = (0..n)
        .map(|k| {
            -(f1[k] * Complex64::new(0.0, sp.xi[k][0]) + f2[k] * Complex64::new(0.0, sp.xi[k][1]))
        })
        .collect();
    vec![out]
}

fn euler_record(grid: Grid, state: &[Coeffs], step: usize, t: f64) -> Result<ConservationRecord> {
    let v = vector_from(grid, state);
    Ok(ConservationRecord {
        step,
        t,
        energy: crate::conservation::energy(&v)?,
        helicity: Some(crate::conservation::helicity(&v)?),
        max_divergence: Some(divergence(&v).max_abs()),
        l2: None,
        hamiltonian: None,
        theta_helicity: None,
    })
}

fn sqg_record(grid: Grid, state: &[Coeffs], step: usize, t: f64) -> Result<ConservationRecord> {
    let th = ScalarField::spectral_unchecked(grid, state[0].clone());
    let vol = grid.volume();
    let l2sq: f64 = state[0].iter().map(|z| z.norm_sqr()).sum::<f64>() * vol;
    let ham: f64 = state[0]
        .iter()
        .enumerate()
        .filter(|(k, _)| grid.wavenumber_sq(*k) > 0)
        .map(|(k, z)| z.norm_sqr() / (grid.wavenumber_sq(k) as f64).sqrt())
        .sum::<f64>()
        * vol
        * 0.5;
    Ok(ConservationRecord {
        step,
        t,
        energy: 0.5 * l2sq,
        helicity: None,
        max_divergence: None,
        l2: Some(l2sq.sqrt()),
        hamiltonian: Some(ham),
        theta_helicity: Some([sqg_helicity(&th, 0)?, sqg_helicity(&th, 1)?]),
    })
}

fn vector_from(grid: Grid, state: &[Coeffs]) -> VectorField {
    VectorField::from_components_unchecked(
        state
            .iter()
            .map(|c| ScalarField::spectral_unchecked(grid, c.clone()).to_physical())
            .collect(),
    )
}

fn integrate<T: FieldLike>(
    cfg: &SolverConfig,
    initial: Vec<Coeffs>,
    rhs: impl Fn(&Spectral, &[Coeffs]) -> Vec<Coeffs>,
    record: impl Fn(Grid, &[Coeffs], usize, f64) -> Result<ConservationRecord>,
    snapshot: impl Fn(Grid, &[Coeffs]) -> T,
    cfl: f64,
) -> Result<SolverRun<T>> {
    let sp = Spectral::new(cfg.grid);
    let mut state = initial;
    for c in state.iter_mut() {
        sp.mask(c);
    }
    let steps = cfg.steps();
    let mut series = TimeSeries::empty();
    let mut log = Vec::new();
    series.push(0.0, snapshot(cfg.grid, &state))?;
    log.push(record(cfg.grid, &state, 0, 0.0)?);
    let f = |s: &[Coeffs]| rhs(&sp, s);
    for step in 1..=steps {
        state = rk4(&state, cfg.dt, &f);
        check_finite(&state, step, (step - 1) as f64 * cfg.dt)?;
        if step % cfg.record_every == 0 || step == steps {
            let t = step as f64 * cfg.dt;
            series.push(t, snapshot(cfg.grid, &state))?;
            log.push(record(cfg.grid, &state, step, t)?);
        }
    }
    Ok(SolverRun {
        config: *cfg,
        series,
        log,
        cfl,
    })
}

/// Integrates `v_t = −P(v·∇v)`.
pub fn euler3d_integrate(v0: &VectorField, cfg: &SolverConfig) -> Result<SolverRun<VectorField>> {
    cfg.validate()?;
    if cfg.system != System::Euler3d || v0.grid() != cfg.grid {
        return Err(Error::arg(
            "initial velocity does not match an euler3d configuration",
        ));
    }
    let div = divergence(v0).max_abs();
    if div > 1e-10 {
        return Err(Error::arg(format!(
            "initial velocity has divergence {div:e} > 1e-10"
        )));
    }
    let cfl = cfg.cfl(v0.magnitude().max_abs());
    let init = v0
        .to_spectral()
        .components()
        .iter()
        .map(|c| c.coefficients().into_owned())
        .collect();
    integrate(cfg, init, euler_rhs, euler_record, vector_from, cfl)
}

/// Integrates `θ_t = −div(vθ)` with `v = (−𝓡₂θ, 𝓡₁θ)`.
pub fn sqg2d_integrate(theta0: &ScalarField, cfg: &SolverConfig) -> Result<SolverRun<ScalarField>> {
    cfg.validate()?;
    if cfg.system != System::Sqg2d || theta0.grid() != cfg.grid {
        return Err(Error::arg(
            "initial temperature does not match an sqg2d configuration",
        ));
    }
    let mean = theta0.mean();
    if mean.abs() > 1e-12 * theta0.max_abs().max(1.0) {
        return Err(Error::arg(format!(
            "initial temperature must have zero mean, got {mean:e}"
        )));
    }
    let speed = crate::conservation::sqg_velocity(theta0)?
        .magnitude()
        .max_abs();
    let cfl = cfg.cfl(speed);
    let init = vec![theta0.to_spectral().into_coefficients()];
    integrate(
        cfg,
        init,
        sqg_rhs,
        sqg_record,
        |g, s| ScalarField::spectral_unchecked(g, s[0].clone()).to_physical(),
        cfl,
    )
}
