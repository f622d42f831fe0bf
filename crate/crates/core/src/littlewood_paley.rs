//! Homogeneous Littlewood–Paley blocks, Besov semi-norms and the
//! finite-difference characterization of Besov regularity.
//!
//! The low-pass profile is `ϱ(r) = 1` for `r ≤ 3/4`, `0` for `r ≥ 1`, with the
//! bump primitive as transition, and `φ(r) = ϱ(r/2) − ϱ(r)`. Block `j`
//! therefore lives on `3/4·2^j ≤ |ξ| ≤ 2^{j+1}` and blocks `j_min..=j_max`
//! sum to one on `1 ≤ |ξ| ≤ 3/2·2^{j_max}`. The mean mode is never in a block.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::fields::{fft_nd, lp_norm, shift, Direction, Grid, ScalarField};
use crate::fit::{fit_line, Trend};
use crate::quadrature::smooth_step;
use crate::scan::ScaleScan;
use crate::seed;

/// `ϱ(r)`: smooth radial low-pass profile.
pub fn rho(r: f64) -> f64 {
    1.0 - smooth_step((r - 0.75) * 4.0)
}

/// `φ(r) = ϱ(r/2) − ϱ(r)`.
pub fn phi(r: f64) -> f64 {
    rho(0.5 * r) - rho(r)
}

/// Block multipliers `φ(2^{-j}|ξ|)` tabulated by the integer `|ξ|²`.
#[derive(Debug)]
pub struct DyadicPartition {
    dim: usize,
    n: usize,
    j_min: i32,
    j_max: i32,
    /// For each `|ξ|²`: the lower of the (at most two) blocks touching it and
    /// the weights of that block and the next one.
    table: Vec<(i32, f64, f64)>,
}

impl DyadicPartition {
    /// Shared partition for a grid (tables are cached per grid shape).
    pub fn for_grid(grid: Grid) -> Arc<DyadicPartition> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<DyadicPartition>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (grid.dim(), grid.points_per_axis());
        if let Some(p) = cache.lock().expect("partition cache").get(&key) {
            return p.clone();
        }
        let p = Arc::new(DyadicPartition::build(grid));
        cache
            .lock()
            .expect("partition cache")
            .insert(key, p.clone());
        p
    }

    fn build(grid: Grid) -> Self {
        let n = grid.points_per_axis();
        let half = (n / 2) as i64;
        // Largest block whose outer radius 2^{j+1} stays within the Nyquist radius.
        let j_max = (half as f64).log2().round() as i32 - 1;
        let j_min = 0;
        let max_q = grid.dim() as i64 * half * half;
        let table = (0..=max_q)
            .map(|q| {
                if q == 0 {
                    return (j_min, 0.0, 0.0);
                }
                let r = (q as f64).sqrt();
                let w = |j: i32| {
                    if j > j_max {
                        0.0
                    } else {
                        phi(r / 2f64.powi(j))
                    }
                };
                let Some(j_lo) = (j_min..=j_max).find(|&j| w(j) != 0.0) else {
                    return (j_min, 0.0, 0.0);
                };
                (j_lo, w(j_lo), w(j_lo + 1))
            })
            .collect();
        DyadicPartition {
            dim: grid.dim(),
            n,
            j_min,
            j_max,
            table,
        }
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn blocks(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    /// Largest `|ξ|` on which the blocks sum to one.
    pub fn covered_radius(&self) -> f64 {
        0.75 * 2f64.powi(self.j_max + 1)
    }

    /// `φ(2^{-j}|ξ|)` for a squared wavenumber.
    #[inline]
    pub fn weight(&self, j: i32, k2: i64) -> f64 {
        let (lo, a, b) = self.table[k2 as usize];
        if j == lo {
            a
        } else if j == lo + 1 {
            b
        } else {
            0.0
        }
    }

    /// `Σ_j φ(2^{-j}|ξ|)` over the representable blocks.
    pub fn partition_sum(&self, k2: i64) -> f64 {
        let (_, a, b) = self.table[k2 as usize];
        a + b
    }

    pub fn check_block(&self, j: i32) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::BlockRange {
                j,
                j_min: self.j_min,
                j_max: self.j_max,
            });
        }
        Ok(())
    }

    fn matches(&self, grid: Grid) -> bool {
        grid.dim() == self.dim && grid.points_per_axis() == self.n
    }
}

/// Coefficients of `Δ̇_j f` given the coefficients of `f`.
pub(crate) fn block_coefficients(
    grid: Grid,
    part: &DyadicPartition,
    coeffs: &[Complex64],
    j: i32,
) -> Vec<Complex64> {
    debug_assert!(part.matches(grid));
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * part.weight(j, grid.wavenumber_sq(i)))
        .collect()
}

fn block_values(grid: Grid, part: &DyadicPartition, coeffs: &[Complex64], j: i32) -> Vec<f64> {
    let mut b = block_coefficients(grid, part, coeffs, j);
    fft_nd(
        &mut b,
        &vec![grid.points_per_axis(); grid.dim()],
        Direction::Inverse,
    );
    b.into_iter().map(|z| z.re).collect()
}

/// `Δ̇_j f`.
pub fn dyadic_block(f: &ScalarField, j: i32) -> Result<ScalarField> {
    let grid = f.grid();
    let part = DyadicPartition::for_grid(grid);
    part.check_block(j)?;
    let c = block_coefficients(grid, &part, &f.coefficients(), j);
    Ok(ScalarField::spectral_unchecked(grid, c))
}

/// `‖Δ̇_j f‖_{L^p}` for every representable block, in increasing `j`.
pub fn block_norms(f: &ScalarField, p: f64) -> Result<Vec<(i32, f64)>> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::arg(format!("L^p exponent must be >= 1, got {p}")));
    }
    let grid = f.grid();
    let part = DyadicPartition::for_grid(grid);
    let coeffs = f.coefficients();
    Ok(part
        .blocks()
        .map(|j| {
            let v = block_values(grid, &part, &coeffs, j);
            (j, crate::fields::lp_of_samples(&v, p, grid.cell_volume()))
        })
        .collect())
}

/// Summation index of a Besov norm: finite `q ≥ 1`, `∞`, or the `c(ℕ)`
/// refinement (measured with the sup norm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummationIndex {
    Finite(f64),
    Infinity,
    CN,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub q: SummationIndex,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, q: SummationIndex) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::arg("smoothness index must be finite"));
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::arg(format!("integrability p must be >= 1, got {p}")));
        }
        if let SummationIndex::Finite(q) = q {
            if q.is_nan() || q < 1.0 || q.is_infinite() {
                return Err(Error::arg(format!(
                    "summation index q must be in [1, ∞), got {q}"
                )));
            }
        }
        Ok(BesovParams { s, p, q })
    }
}

/// `‖f‖_{Ḃ^s_{p,q}}`: the ℓ^q norm over representable `j` of `2^{js}‖Δ̇_j f‖_{L^p}`.
pub fn besov_seminorm(f: &ScalarField, params: &BesovParams) -> Result<f64> {
    let norms = block_norms(f, params.p)?;
    let seq = norms
        .iter()
        .map(|(j, b)| 2f64.powf(*j as f64 * params.s) * b);
    Ok(match params.q {
        SummationIndex::Finite(q) => seq.map(|x| x.powf(q)).sum::<f64>().powf(1.0 / q),
        SummationIndex::Infinity | SummationIndex::CN => seq.fold(0.0, f64::max),
    })
}

/// Inhomogeneous norm `‖f‖_{L^p} + ‖f‖_{Ḃ^s_{p,q}}`.
pub fn besov_norm(f: &ScalarField, params: &BesovParams) -> Result<f64> {
    Ok(lp_norm(f, params.p)? + besov_seminorm(f, params)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub j: i32,
    pub block_norm: f64,
    pub compensated: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileVerdict {
    Trend { trend: Trend, slope: f64 },
    InsufficientShells { nonzero: usize },
}

/// The compensated sequence `2^{jα}‖Δ̇_j f‖_{L^p}` with its trend verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovProfile {
    pub alpha: f64,
    pub p: f64,
    pub entries: Vec<ProfileEntry>,
    pub verdict: ProfileVerdict,
    /// `−slope` of `log₂‖Δ̇_j f‖` against `j` over the fitted shells.
    pub estimated_exponent: Option<f64>,
    /// Blocks used for the trend fit.
    pub fit_shells: Vec<i32>,
}

impl BesovProfile {
    pub fn trend(&self) -> Option<Trend> {
        match self.verdict {
            ProfileVerdict::Trend { trend, .. } => Some(trend),
            ProfileVerdict::InsufficientShells { .. } => None,
        }
    }

    pub fn sup_compensated(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.compensated))
    }
}

/// Relative level below which a block counts as empty.
const EMPTY_SHELL: f64 = 1e-12;

pub fn cn_profile(f: &ScalarField, alpha: f64, p: f64) -> Result<BesovProfile> {
    let norms = block_norms(f, p)?;
    let entries: Vec<ProfileEntry> = norms
        .iter()
        .map(|&(j, b)| ProfileEntry {
            j,
            block_norm: b,
            compensated: 2f64.powf(j as f64 * alpha) * b,
        })
        .collect();
    let peak = entries.iter().fold(0.0, |m: f64, e| m.max(e.block_norm));
    let nonzero: Vec<ProfileEntry> = entries
        .iter()
        .filter(|e| peak > 0.0 && e.block_norm > EMPTY_SHELL * peak)
        .copied()
        .collect();
    if nonzero.len() < 3 {
        return Ok(BesovProfile {
            alpha,
            p,
            entries,
            verdict: ProfileVerdict::InsufficientShells {
                nonzero: nonzero.len(),
            },
            estimated_exponent: None,
            fit_shells: Vec::new(),
        });
    }
    let top = &nonzero[nonzero.len() / 2..];
    let js: Vec<f64> = top.iter().map(|e| e.j as f64).collect();
    let comp: Vec<f64> = top.iter().map(|e| e.compensated.log2()).collect();
    let raw: Vec<f64> = top.iter().map(|e| e.block_norm.log2()).collect();
    let slope = fit_line(&js, &comp).map(|f| f.slope).unwrap_or(0.0);
    let estimated_exponent = fit_line(&js, &raw).map(|f| -f.slope);
    Ok(BesovProfile {
        alpha,
        p,
        entries,
        verdict: ProfileVerdict::Trend {
            trend: Trend::from_decay_rate(-slope),
            slope,
        },
        estimated_exponent,
        fit_shells: top.iter().map(|e| e.j).collect(),
    })
}

/// Seed of the direction sample used by the finite-difference modulus.
pub const DIRECTION_SEED: u64 = 0x6c70_6469_7265_6374;

/// The axis unit vectors followed by `2d` seeded random unit vectors.
pub fn sample_directions(dim: usize, seed_value: u64) -> Vec<[f64; 3]> {
    let mut dirs = Vec::with_capacity(3 * dim);
    for a in 0..dim {
        let mut e = [0.0; 3];
        e[a] = 1.0;
        dirs.push(e);
    }
    let mut rng = seed::rng(seed_value, "directions");
    while dirs.len() < 3 * dim {
        let mut v = [0.0; 3];
        for c in v.iter_mut().take(dim) {
            *c = rng.random_range(-1.0..1.0);
        }
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-4 && r2 <= 1.0 {
            let r = r2.sqrt();
            dirs.push([v[0] / r, v[1] / r, v[2] / r]);
        }
    }
    dirs
}

fn difference_norm(f: &ScalarField, y: [f64; 3], p: f64) -> Result<f64> {
    lp_norm(&shift(f, &y).sub(f)?, p)
}

/// `sup_e ‖f(·−s e) − f‖_{L^p}` over the direction sample, per scale `s`.
/// The scan's compensated column is the modulus divided by `s^α`.
pub fn finite_difference_modulus(
    f: &ScalarField,
    alpha: f64,
    p: f64,
    scales: &[f64],
) -> Result<ScaleScan> {
    finite_difference_modulus_with(
        f,
        alpha,
        p,
        scales,
        &sample_directions(f.grid().dim(), DIRECTION_SEED),
    )
}

pub fn finite_difference_modulus_with(
    f: &ScalarField,
    alpha: f64,
    p: f64,
    scales: &[f64],
    directions: &[[f64; 3]],
) -> Result<ScaleScan> {
    if scales.is_empty() {
        return Err(Error::arg("scale list is empty"));
    }
    if let Some(s) = scales
        .iter()
        .find(|s| !(**s > 0.0 && **s < std::f64::consts::PI))
    {
        return Err(Error::arg(format!("difference scale {s} outside (0, π)")));
    }
    let f = f.to_spectral();
    let mut values = Vec::with_capacity(scales.len());
    for &s in scales {
        let mut best = 0.0f64;
        for e in directions {
            let y = [s * e[0], s * e[1], s * e[2]];
            best = best.max(difference_norm(&f, y, p)?);
        }
        values.push(best);
    }
    ScaleScan::new(scales, &values, Some(alpha))
}

/// Both sides of `‖Δ̇_j f‖_{L^b} ≤ 2^{jd(1/a − 1/b)} ‖Δ̇_j f‖_{L^a}`.
pub fn bernstein_check(f: &ScalarField, j: i32, a: f64, b: f64) -> Result<(f64, f64)> {
    if a.is_nan() || a < 1.0 || b.is_nan() || b < a {
        return Err(Error::arg(format!(
            "Bernstein exponents need 1 <= a <= b, got a = {a}, b = {b}"
        )));
    }
    let block = dyadic_block(f, j)?;
    let lhs = lp_norm(&block, b)?;
    let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
    let d = f.grid().dim() as f64;
    let rhs = 2f64.powf(j as f64 * d * (inv(a) - inv(b))) * lp_norm(&block, a)?;
    Ok((lhs, rhs))
}

/// Scales `h, 2h, 4h, …` below `π/2` used for difference semi-norms.
pub fn default_difference_scales(grid: Grid) -> Vec<f64> {
    let mut s = grid.spacing();
    let mut out = Vec::new();
    while s < std::f64::consts::FRAC_PI_2 {
        out.push(s);
        s *= 2.0;
    }
    out
}

/// `sup_{s,e} ‖f(·−s e) − f‖_{L^p} / s^α` over the default scales and directions.
pub fn difference_seminorm(f: &ScalarField, alpha: f64, p: f64) -> Result<f64> {
    let scan = finite_difference_modulus(f, alpha, p, &default_difference_scales(f.grid()))?;
    Ok(scan.compensated.iter().fold(0.0, |m, v| m.max(*v)))
}

/// Measured sides of the product estimate
/// `[fg]_{α,p} ≤ C(‖f‖_{L^∞}[g]_{α,p} + [f]_{α,∞}‖g‖_{L^p})`, with the
/// difference-quotient semi-norms `[·]`.
pub fn product_besov_check(
    f: &ScalarField,
    g: &ScalarField,
    alpha: f64,
    p: f64,
) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::arg(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let fg = f.mul_pointwise(g)?;
    let lhs = difference_seminorm(&fg, alpha, p)?;
    let rhs = lp_norm(f, f64::INFINITY)? * difference_seminorm(g, alpha, p)?
        + difference_seminorm(f, alpha, f64::INFINITY)? * lp_norm(g, p)?;
    Ok((lhs, rhs))
}
