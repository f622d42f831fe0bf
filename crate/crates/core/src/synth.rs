//! Seeded synthetic fields: calibrated random Besov fields, classical exact
//! flows and manufactured compressible states.
//!
//! Shell `j` of a random Besov field occupies `2^j ≤ |ξ| ≤ 3/2·2^j`, where the
//! dyadic multiplier of block `j` equals one and every other block vanishes,
//! so `Δ̇_j f` is exactly shell `j`. Each shell carries uniform random phases
//! under a smooth radial amplitude and is then rescaled until its measured
//! block norm hits the target.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::conservation::PressureLaw;
use crate::error::{Error, Result};
use crate::fields::{leray_project, lp_norm, FieldLike, Grid, ScalarField, VectorField};
use crate::littlewood_paley::DyadicPartition;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BesovVariant {
    /// `2^{jα}‖Δ̇_j f‖_{L^p} = 1` on every shell.
    #[serde(alias = "infinity", alias = "inf")]
    InfinityType,
    /// `2^{jα}‖Δ̇_j f‖_{L^p}` follows the decay law.
    #[serde(alias = "cN", alias = "cn")]
    CnType,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CnDecay {
    /// `1/(1+j)`
    #[default]
    Reciprocal,
    /// `(1+j)^{-exponent}`
    Power { exponent: f64 },
}

impl CnDecay {
    pub fn at(&self, j: i32) -> f64 {
        match self {
            CnDecay::Reciprocal => 1.0 / (1.0 + j as f64),
            CnDecay::Power { exponent } => (1.0 + j as f64).powf(-exponent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovFieldSpec {
    pub alpha: f64,
    pub p: f64,
    pub variant: BesovVariant,
    #[serde(default)]
    pub cn_decay: CnDecay,
    pub seed: u64,
    /// Inclusive shell range; `None` uses every representable block.
    #[serde(default)]
    pub shells: Option<(i32, i32)>,
}

impl BesovFieldSpec {
    pub fn new(alpha: f64, p: f64, variant: BesovVariant, seed: u64) -> Self {
        BesovFieldSpec {
            alpha,
            p,
            variant,
            cn_decay: CnDecay::Reciprocal,
            seed,
            shells: None,
        }
    }

    pub fn with_shells(mut self, j_lo: i32, j_hi: i32) -> Self {
        self.shells = Some((j_lo, j_hi));
        self
    }

    /// Prescribed compensated block norm of shell `j`.
    pub fn target(&self, j: i32) -> f64 {
        match self.variant {
            BesovVariant::InfinityType => 1.0,
            BesovVariant::CnType => self.cn_decay.at(j),
        }
    }

    fn validate(&self, grid: Grid) -> Result<(i32, i32)> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::arg(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.p.is_nan() || self.p < 1.0 {
            return Err(Error::arg(format!(
                "integrability p must be >= 1, got {}",
                self.p
            )));
        }
        let part = DyadicPartition::for_grid(grid);
        let (lo, hi) = self.shells.unwrap_or((part.j_min(), part.j_max()));
        if lo > hi {
            return Err(Error::arg(format!("empty shell range ({lo}, {hi})")));
        }
        part.check_block(lo)?;
        part.check_block(hi)?;
        Ok((lo, hi))
    }
}

/// Whether `|ξ|² = k2` lies in the pure part of shell `j`.
pub fn in_shell(k2: i64, j: i32) -> bool {
    let lo = 1i64 << (2 * j);
    // (3/2·2^j)² = 9·4^j / 4
    let hi4 = 9 * lo;
    k2 >= lo && 4 * k2 <= hi4
}

/// Random-phase coefficients of shell `j` with the amplitude `|ξ|^{−α−d/2}`.
fn shell_coefficients(grid: Grid, j: i32, alpha: f64, rng: &mut impl Rng) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let half = (n / 2) as i64;
    let d = grid.dim();
    let mut c = vec![Complex64::default(); grid.len()];
    for i in 0..grid.len() {
        let k = grid.wavevector(i);
        if k[..d].iter().any(|x| x.abs() == half) {
            continue;
        }
        let k2 = grid.wavenumber_sq(i);
        if !in_shell(k2, j) {
            continue;
        }
        let m = grid.multi_index(i);
        let mut neg = [0usize; 3];
        for a in 0..d {
            neg[a] = (n - m[a]) % n;
        }
        let partner = grid.flat_index(neg);
        if partner < i {
            continue;
        }
        let amp = (k2 as f64).powf(-0.5 * (alpha + 0.5 * d as f64));
        let theta = rng.random_range(0.0..2.0 * PI);
        let z = Complex64::from_polar(amp, theta);
        c[i] = z;
        c[partner] = z.conj();
    }
    c
}

const CALIBRATION_TOL: f64 = 1e-6;
const CALIBRATION_ITERS: usize = 30;

/// Scales each component list so that the block norm of shell `j` equals
/// `target(j)·2^{−jα}`.
fn calibrate<F: FieldLike>(
    shells: &mut [(i32, Vec<Vec<Complex64>>)],
    grid: Grid,
    spec: &BesovFieldSpec,
    build: impl Fn(&[Vec<Complex64>]) -> F,
) -> Result<()> {
    for _ in 0..CALIBRATION_ITERS {
        let mut worst = 0.0f64;
        for (j, comps) in shells.iter_mut() {
            let field = build(comps);
            let measured = lp_norm(&field, spec.p)?;
            let want = spec.target(*j) * 2f64.powf(-(*j as f64) * spec.alpha);
            if measured == 0.0 {
                return Err(Error::arg(format!(
                    "shell {j} has no lattice modes on a {}-point grid",
                    grid.points_per_axis()
                )));
            }
            let ratio = want / measured;
            worst = worst.max((ratio - 1.0).abs());
            for c in comps.iter_mut() {
                c.iter_mut().for_each(|z| *z *= ratio);
            }
        }
        if worst < CALIBRATION_TOL {
            break;
        }
    }
    Ok(())
}

fn sum_shells(grid: Grid, shells: &[(i32, Vec<Vec<Complex64>>)], component: usize) -> ScalarField {
    let mut acc = vec![Complex64::default(); grid.len()];
    for (_, comps) in shells {
        for (a, z) in acc.iter_mut().zip(&comps[component]) {
            *a += z;
        }
    }
    ScalarField::spectral_unchecked(grid, acc).to_physical()
}

pub fn random_besov_field(grid: Grid, spec: &BesovFieldSpec) -> Result<ScalarField> {
    let (lo, hi) = spec.validate(grid)?;
    let mut shells: Vec<(i32, Vec<Vec<Complex64>>)> = (lo..=hi)
        .map(|j| {
            let mut rng = seed::rng(spec.seed, &format!("besov-shell-{j}"));
            (j, vec![shell_coefficients(grid, j, spec.alpha, &mut rng)])
        })
        .collect();
    calibrate(&mut shells, grid, spec, |c| {
        ScalarField::spectral_unchecked(grid, c[0].clone())
    })?;
    Ok(sum_shells(grid, &shells, 0))
}

/// Componentwise random Besov vector field; with `solenoidal` each shell is
/// Leray-projected before calibration (the projection keeps shells apart).
pub fn random_besov_vector_field(
    grid: Grid,
    spec: &BesovFieldSpec,
    solenoidal: bool,
) -> Result<VectorField> {
    let (lo, hi) = spec.validate(grid)?;
    let d = grid.dim();
    let mut shells: Vec<(i32, Vec<Vec<Complex64>>)> = Vec::new();
    for j in lo..=hi {
        let comps: Vec<Vec<Complex64>> = (0..d)
            .map(|a| {
                let mut rng = seed::rng(spec.seed, &format!("besov-shell-{j}-component-{a}"));
                shell_coefficients(grid, j, spec.alpha, &mut rng)
            })
            .collect();
        let comps = if solenoidal {
            let v = VectorField::from_components_unchecked(
                comps
                    .into_iter()
                    .map(|c| ScalarField::spectral_unchecked(grid, c))
                    .collect(),
            );
            leray_project(&v)
                .into_components()
                .into_iter()
                .map(|c| c.into_coefficients())
                .collect()
        } else {
            comps
        };
        shells.push((j, comps));
    }
    if solenoidal {
        calibrate(&mut shells, grid, spec, |c| {
            VectorField::from_components_unchecked(
                c.iter()
                    .map(|x| ScalarField::spectral_unchecked(grid, x.clone()))
                    .collect(),
            )
        })?;
        let comps = (0..d).map(|a| sum_shells(grid, &shells, a)).collect();
        return Ok(VectorField::from_components_unchecked(comps));
    }
    // Non-solenoidal fields are calibrated component by component.
    let comps = (0..d)
        .map(|a| {
            let mut per: Vec<(i32, Vec<Vec<Complex64>>)> = shells
                .iter()
                .map(|(j, c)| (*j, vec![c[a].clone()]))
                .collect();
            calibrate(&mut per, grid, spec, |c| {
                ScalarField::spectral_unchecked(grid, c[0].clone())
            })?;
            Ok(sum_shells(grid, &per, 0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorField::from_components_unchecked(comps))
}

/// `(sin x₁ cos x₂ cos x₃, −cos x₁ sin x₂ cos x₃, 0)`.
pub fn taylor_green(grid: Grid) -> Result<VectorField> {
    require_3d(grid)?;
    Ok(VectorField::from_fn(grid, |x| {
        [
            x[0].sin() * x[1].cos() * x[2].cos(),
            -x[0].cos() * x[1].sin() * x[2].cos(),
            0.0,
        ]
    }))
}

/// `(A sin x₃ + C cos x₂, B sin x₁ + A cos x₃, C sin x₂ + B cos x₁)`.
pub fn abc_flow(grid: Grid, a: f64, b: f64, c: f64) -> Result<VectorField> {
    require_3d(grid)?;
    Ok(VectorField::from_fn(grid, |x| {
        [
            a * x[2].sin() + c * x[1].cos(),
            b * x[0].sin() + a * x[2].cos(),
            c * x[1].sin() + b * x[0].cos(),
        ]
    }))
}

fn require_3d(grid: Grid) -> Result<()> {
    if grid.dim() != 3 {
        return Err(Error::arg(format!(
            "this flow is three-dimensional, grid has dimension {}",
            grid.dim()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityProfile {
    /// `sin x₁ sin x₂ sin x₃` (`sin x₁ sin x₂` in two dimensions).
    SineProduct,
    /// Random phases on `1 ≤ |ξ| ≤ 4`, scaled to unit maximum on the grid.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VelocityProfile {
    Abc {
        a: f64,
        b: f64,
        c: f64,
    },
    /// Leray-projected random phases on `1 ≤ |ξ| ≤ 4`, unit L^∞ on the grid.
    RandomSolenoidal,
    Zero,
}

#[derive(Debug, Clone)]
pub struct ManufacturedState {
    pub rho: ScalarField,
    pub v: VectorField,
    /// Declared density bounds `c₁ = 1 − amplitude`, `c₂ = 1 + amplitude`.
    pub bounds: (f64, f64),
    pub law: PressureLaw,
}

fn smooth_random(grid: Grid, rng: &mut impl Rng) -> ScalarField {
    let f = ScalarField::spectral_unchecked(grid, shell_coefficients_band(grid, 1, 16, rng));
    let m = f.max_abs();
    f.scale(1.0 / m).to_physical()
}

fn shell_coefficients_band(
    grid: Grid,
    k2_lo: i64,
    k2_hi: i64,
    rng: &mut impl Rng,
) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let d = grid.dim();
    let mut c = vec![Complex64::default(); grid.len()];
    for i in 0..grid.len() {
        let k2 = grid.wavenumber_sq(i);
        if k2 < k2_lo || k2 > k2_hi {
            continue;
        }
        let m = grid.multi_index(i);
        let mut neg = [0usize; 3];
        for a in 0..d {
            neg[a] = (n - m[a]) % n;
        }
        let partner = grid.flat_index(neg);
        if partner < i {
            continue;
        }
        let z = Complex64::from_polar(1.0 / k2 as f64, rng.random_range(0.0..2.0 * PI));
        c[i] = z;
        c[partner] = z.conj();
    }
    c
}

pub fn manufactured_compressible(
    grid: Grid,
    amplitude: f64,
    law: PressureLaw,
    density: DensityProfile,
    velocity: VelocityProfile,
    seed_value: u64,
) -> Result<ManufacturedState> {
    if !(0.0..1.0).contains(&amplitude) {
        return Err(Error::arg(format!(
            "amplitude must lie in [0, 1), got {amplitude}"
        )));
    }
    let profile = match density {
        DensityProfile::SineProduct => ScalarField::from_fn(grid, |x| {
            let s = x[0].sin() * x[1].sin();
            if grid.dim() == 3 {
                s * x[2].sin()
            } else {
                s
            }
        }),
        DensityProfile::Random => {
            smooth_random(grid, &mut seed::rng(seed_value, "manufactured-density"))
        }
    };
    let rho = profile.map(|p| 1.0 + amplitude * p);
    let v = match velocity {
        VelocityProfile::Abc { a, b, c } => abc_flow(grid, a, b, c)?,
        VelocityProfile::Zero => VectorField::zeros(grid),
        VelocityProfile::RandomSolenoidal => {
            let mut rng = seed::rng(seed_value, "manufactured-velocity");
            let comps = (0..grid.dim())
                .map(|_| {
                    ScalarField::spectral_unchecked(
                        grid,
                        shell_coefficients_band(grid, 1, 16, &mut rng),
                    )
                })
                .collect();
            let v = leray_project(&VectorField::from_components_unchecked(comps));
            let m = v.max_abs();
            v.scale(1.0 / m).to_physical()
        }
    };
    Ok(ManufacturedState {
        rho,
        v,
        bounds: (1.0 - amplitude, 1.0 + amplitude),
        law,
    })
}
