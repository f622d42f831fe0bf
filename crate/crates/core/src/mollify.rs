//! The standard mollifier `η_ε(x) = ε^{-d} C₀ e^{−1/(1−|x/ε|²)}` and
//! convolution with it on the torus.
//!
//! Two realizations share one interface. The lattice kernel samples `η_ε` at
//! the grid points, renormalizes the samples to unit discrete mass and
//! convolves exactly on the grid: it is positivity preserving and obeys
//! Young's inequality sample by sample, but needs `ε ≥ 2h`. The continuum
//! kernel multiplies by the exact Fourier transform of `η_ε`, so it acts on
//! band-limited fields as the true convolution at any `ε`.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::fields::{apply_real_multiplier, derivative, lp_norm, FieldLike, Grid, ScalarField};
use crate::quadrature::{bump, integrate, mollifier_constant};
use crate::scan::ScaleScan;

/// Upper bound on `ε` so the periodized kernel does not wrap onto itself.
pub const MAX_EPS: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Lattice,
    Continuum,
}

/// `ε`-range accepted by a kernel on a grid, as `[min, MAX_EPS)`.
pub fn resolvable_range(grid: Grid, kind: KernelKind) -> (f64, f64) {
    match kind {
        KernelKind::Lattice => (2.0 * grid.spacing(), MAX_EPS),
        KernelKind::Continuum => (0.0, MAX_EPS),
    }
}

fn check_eps(grid: Grid, eps: f64, kind: KernelKind) -> Result<()> {
    let (lo, hi) = resolvable_range(grid, kind);
    let ok = eps.is_finite() && eps >= lo && eps < hi && eps > 0.0;
    if !ok {
        return Err(Error::Resolvability {
            eps,
            min_eps: lo,
            max_eps: hi,
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct MollifierKernel {
    grid: Grid,
    eps: f64,
    kind: KernelKind,
    /// Real multiplier per spectral index.
    multiplier: Vec<f64>,
    /// Discrete mass `Σ η_ε(x_i) h^d` before renormalization (lattice only).
    raw_mass: Option<f64>,
}

impl MollifierKernel {
    pub fn new(grid: Grid, eps: f64, kind: KernelKind) -> Result<Self> {
        match kind {
            KernelKind::Lattice => Self::lattice(grid, eps),
            KernelKind::Continuum => Self::continuum(grid, eps),
        }
    }

    pub fn lattice(grid: Grid, eps: f64) -> Result<Self> {
        check_eps(grid, eps, KernelKind::Lattice)?;
        let d = grid.dim();
        let c0 = mollifier_constant(d);
        let samples: Vec<f64> = (0..grid.len())
            .map(|i| {
                let x = grid.centered_coords(i);
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt() / eps;
                c0 * bump(r) / eps.powi(d as i32)
            })
            .collect();
        let raw_mass = samples.iter().sum::<f64>() * grid.cell_volume();
        let kernel = ScalarField::from_values(grid, samples)?;
        let scale = grid.volume() / raw_mass;
        let multiplier = kernel.coefficients().iter().map(|c| c.re * scale).collect();
        Ok(MollifierKernel {
            grid,
            eps,
            kind: KernelKind::Lattice,
            multiplier,
            raw_mass: Some(raw_mass),
        })
    }

    pub fn continuum(grid: Grid, eps: f64) -> Result<Self> {
        check_eps(grid, eps, KernelKind::Continuum)?;
        let table = transform_table(grid.dim());
        let multiplier = (0..grid.len())
            .map(|i| table.eval(eps * (grid.wavenumber_sq(i) as f64).sqrt()))
            .collect();
        Ok(MollifierKernel {
            grid,
            eps,
            kind: KernelKind::Continuum,
            multiplier,
            raw_mass: None,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn multiplier(&self) -> &[f64] {
        &self.multiplier
    }

    /// Mass of the raw lattice samples; the kernel itself always has mass one.
    pub fn raw_mass(&self) -> Option<f64> {
        self.raw_mass
    }

    /// Kernel samples, `η_ε` wrapped onto the torus (lattice) or the
    /// band-limited interpolant of `η_ε` (continuum).
    pub fn kernel(&self) -> ScalarField {
        let vol = self.grid.volume();
        let coeffs = self
            .multiplier
            .iter()
            .map(|m| num_complex::Complex64::new(m / vol, 0.0))
            .collect();
        ScalarField::spectral_unchecked(self.grid, coeffs)
    }

    pub fn apply_scalar(&self, f: &ScalarField) -> Result<ScalarField> {
        if f.grid() != self.grid {
            return Err(Error::GridMismatch("field and kernel grids differ".into()));
        }
        Ok(apply_real_multiplier(f, |i| self.multiplier[i]))
    }

    pub fn apply<F: FieldLike>(&self, f: &F) -> Result<F> {
        let comps = f
            .scalar_components()
            .into_iter()
            .map(|c| self.apply_scalar(c))
            .collect::<Result<_>>()?;
        Ok(F::from_scalar_components(comps))
    }
}

/// `f^ε` with the lattice kernel.
pub fn mollify<F: FieldLike>(f: &F, eps: f64) -> Result<F> {
    MollifierKernel::lattice(f.grid(), eps)?.apply(f)
}

/// `f^ε` with the exact continuum multiplier.
pub fn mollify_continuum<F: FieldLike>(f: &F, eps: f64) -> Result<F> {
    MollifierKernel::continuum(f.grid(), eps)?.apply(f)
}

/// Radial Fourier transform `η̂(k)` of the unit-scale mollifier, tabulated
/// on `[0, K_MAX]` and evaluated by local Lagrange interpolation.
struct TransformTable {
    step: f64,
    values: Vec<f64>,
}

pub const K_MAX: f64 = 512.0;
const TABLE_STEP: f64 = 1.0 / 32.0;
const STENCIL: usize = 8;

impl TransformTable {
    fn build(dim: usize) -> Self {
        let c0 = mollifier_constant(dim);
        // Projection of η onto one axis, P(x) = ∫ η(x, y) dy over the other axes.
        let projection = |x: f64| -> f64 {
            let a2 = 1.0 - x * x;
            if a2 <= 0.0 {
                return 0.0;
            }
            match dim {
                1 => c0 * bump(x),
                2 => {
                    let a = a2.sqrt();
                    2.0 * c0 * a * integrate(|t| bump_scaled(a2, t), 0.0, 1.0, 8)
                }
                _ => {
                    std::f64::consts::PI
                        * c0
                        * integrate(|u| (-1.0 / (1.0 - u)).exp(), x * x, 1.0, 8)
                }
            }
        };
        // Nodes of a composite 16-point rule on [0, 1].
        let panels = 64;
        let (gx, gw) = crate::quadrature::gauss_legendre(16);
        let mut nodes = Vec::with_capacity(panels * 16);
        let h = 1.0 / panels as f64;
        for p in 0..panels {
            for (x, w) in gx.iter().zip(&gw) {
                let t = (p as f64 + 0.5 * (x + 1.0)) * h;
                nodes.push((t, 0.5 * h * w * 2.0 * projection(t)));
            }
        }
        let count = (K_MAX / TABLE_STEP).round() as usize + STENCIL;
        let mut values: Vec<f64> = (0..=count)
            .map(|m| {
                let k = m as f64 * TABLE_STEP;
                nodes.iter().map(|(t, w)| w * (k * t).cos()).sum()
            })
            .collect();
        let norm = values[0];
        values.iter_mut().for_each(|v| *v /= norm);
        TransformTable {
            step: TABLE_STEP,
            values,
        }
    }

    fn eval(&self, k: f64) -> f64 {
        if k >= K_MAX {
            return 0.0;
        }
        let u = k / self.step;
        let base = (u.floor() as isize - (STENCIL as isize / 2 - 1)).max(0) as usize;
        let mut acc = 0.0;
        for a in 0..STENCIL {
            let ia = base as isize + a as isize;
            let mut w = 1.0;
            for b in 0..STENCIL {
                if a != b {
                    let ib = base as isize + b as isize;
                    w *= (u - ib as f64) / (ia - ib) as f64;
                }
            }
            acc += w * self.values[ia as usize];
        }
        acc
    }
}

fn bump_scaled(a2: f64, t: f64) -> f64 {
    let s = a2 * (1.0 - t * t);
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

fn transform_table(dim: usize) -> &'static TransformTable {
    static TABLES: [OnceLock<TransformTable>; 3] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[dim - 1].get_or_init(|| TransformTable::build(dim))
}

/// `η̂(k)` for the unit-scale mollifier in `R^dim`, normalized to `η̂(0) = 1`.
pub fn kernel_transform(dim: usize, k: f64) -> f64 {
    transform_table(dim).eval(k.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "order", rename_all = "snake_case")]
pub enum RateMode {
    /// `‖f^ε − f‖_{L^p}`
    Approximation,
    /// `‖∇^k f^ε‖_{L^p}`
    Derivative(u32),
}

/// Pointwise Frobenius norm field of `∇^k f` (all ordered index tuples).
pub fn derivative_tensor_magnitude(f: &ScalarField, k: u32) -> Result<ScalarField> {
    let d = f.grid().dim();
    let mut layer = vec![f.to_spectral()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(layer.len() * d);
        for g in &layer {
            for a in 0..d {
                next.push(derivative(g, a)?);
            }
        }
        layer = next;
    }
    let grid = f.grid();
    let mut acc = vec![0.0; grid.len()];
    for g in &layer {
        for (s, v) in acc.iter_mut().zip(g.values().iter()) {
            *s += v * v;
        }
    }
    ScalarField::from_values(grid, acc.into_iter().map(f64::sqrt).collect())
}

pub fn mollifier_rate_scan(
    f: &ScalarField,
    p: f64,
    scales: &[f64],
    mode: RateMode,
    kind: KernelKind,
    expected_exponent: Option<f64>,
) -> Result<ScaleScan> {
    if scales.is_empty() {
        return Err(Error::arg("scale list is empty"));
    }
    for &eps in scales {
        check_eps(f.grid(), eps, kind)?;
    }
    let f = f.to_spectral();
    let mut values = Vec::with_capacity(scales.len());
    for &eps in scales {
        let fe = MollifierKernel::new(f.grid(), eps, kind)?.apply_scalar(&f)?;
        let v = match mode {
            RateMode::Approximation => lp_norm(&fe.sub(&f)?, p)?,
            RateMode::Derivative(k) => lp_norm(&derivative_tensor_magnitude(&fe, k)?, p)?,
        };
        values.push(v);
    }
    ScaleScan::new(scales, &values, expected_exponent)
}

/// `‖∇^k η_ε‖_{L¹}` measured on the grid from the continuum kernel.
pub fn kernel_derivative_l1(grid: Grid, eps: f64, k: u32) -> Result<f64> {
    let kernel = MollifierKernel::continuum(grid, eps)?.kernel();
    lp_norm(&derivative_tensor_magnitude(&kernel, k)?, 1.0)
}
