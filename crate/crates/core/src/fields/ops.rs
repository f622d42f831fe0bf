//! Fourier-multiplier differential operators, norms, shifts and products.

use num_complex::Complex64;

use super::fft::{self, Direction};
use super::field::{hermitize, FieldLike, ScalarField, VectorField};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Multiplies every Fourier coefficient by `m(flat_index)`. The multiplier
/// must respect `m(−ξ) = conj m(ξ)` for the output to stay real.
pub fn apply_multiplier(f: &ScalarField, m: impl Fn(usize) -> Complex64) -> ScalarField {
    let mut c = f.coefficients().into_owned();
    for (i, z) in c.iter_mut().enumerate() {
        *z *= m(i);
    }
    ScalarField::spectral_unchecked(f.grid(), c)
}

/// Real-valued radial or even multiplier.
pub fn apply_real_multiplier(f: &ScalarField, m: impl Fn(usize) -> f64) -> ScalarField {
    let mut c = f.coefficients().into_owned();
    for (i, z) in c.iter_mut().enumerate() {
        *z *= m(i);
    }
    ScalarField::spectral_unchecked(f.grid(), c)
}

pub fn derivative(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    let g = f.grid();
    if axis >= g.dim() {
        return Err(Error::arg(format!(
            "axis {axis} out of range for dimension {}",
            g.dim()
        )));
    }
    Ok(apply_multiplier(f, |i| {
        Complex64::new(0.0, g.derivative_wavevector(i)[axis])
    }))
}

pub fn gradient(f: &ScalarField) -> VectorField {
    let components = (0..f.grid().dim())
        .map(|a| derivative(f, a).expect("axis in range"))
        .collect();
    VectorField::from_components_unchecked(components)
}

/// Curl of a vector field: a vector in three dimensions, the scalar
/// `∂₁v₂ − ∂₂v₁` in two.
#[derive(Debug, Clone)]
pub enum Curl {
    Vector(VectorField),
    Scalar(ScalarField),
}

impl Curl {
    pub fn into_vector(self) -> Option<VectorField> {
        match self {
            Curl::Vector(v) => Some(v),
            Curl::Scalar(_) => None,
        }
    }

    pub fn into_scalar(self) -> Option<ScalarField> {
        match self {
            Curl::Scalar(s) => Some(s),
            Curl::Vector(_) => None,
        }
    }
}

pub fn curl(v: &VectorField) -> Result<Curl> {
    match v.dim() {
        3 => curl3(v).map(Curl::Vector),
        2 => curl2(v).map(Curl::Scalar),
        d => Err(Error::arg(format!("curl undefined in dimension {d}"))),
    }
}

pub fn curl3(v: &VectorField) -> Result<VectorField> {
    if v.dim() != 3 {
        return Err(Error::arg(
            "three-dimensional curl needs a 3-component field",
        ));
    }
    let g = v.grid();
    let c: Vec<_> = v
        .components()
        .iter()
        .map(|f| f.coefficients().into_owned())
        .collect();
    let mut out = vec![vec![Complex64::default(); g.len()]; 3];
    for i in 0..g.len() {
        let k = g.derivative_wavevector(i);
        let ik = |a: usize| Complex64::new(0.0, k[a]);
        out[0][i] = ik(1) * c[2][i] - ik(2) * c[1][i];
        out[1][i] = ik(2) * c[0][i] - ik(0) * c[2][i];
        out[2][i] = ik(0) * c[1][i] - ik(1) * c[0][i];
    }
    Ok(VectorField::from_components_unchecked(
        out.into_iter()
            .map(|c| ScalarField::spectral_unchecked(g, c))
            .collect(),
    ))
}

pub fn curl2(v: &VectorField) -> Result<ScalarField> {
    if v.dim() != 2 {
        return Err(Error::arg("two-dimensional curl needs a 2-component field"));
    }
    derivative(v.component(1), 0)?.sub(&derivative(v.component(0), 1)?)
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let g = v.grid();
    let mut acc = vec![Complex64::default(); g.len()];
    for (a, comp) in v.components().iter().enumerate() {
        let c = comp.coefficients();
        for i in 0..g.len() {
            acc[i] += Complex64::new(0.0, g.derivative_wavevector(i)[a]) * c[i];
        }
    }
    ScalarField::spectral_unchecked(g, acc)
}

/// Projection onto divergence-free fields; the mean mode passes through.
pub fn leray_project(v: &VectorField) -> VectorField {
    let g = v.grid();
    let d = g.dim();
    let c: Vec<_> = v
        .components()
        .iter()
        .map(|f| f.coefficients().into_owned())
        .collect();
    let mut out = c.clone();
    for i in 0..g.len() {
        let k = g.derivative_wavevector(i);
        let k2: f64 = k[..d].iter().map(|x| x * x).sum();
        if k2 == 0.0 {
            continue;
        }
        let mut kdotc = Complex64::default();
        for a in 0..d {
            kdotc += k[a] * c[a][i];
        }
        for a in 0..d {
            out[a][i] = c[a][i] - k[a] * kdotc / k2;
        }
    }
    VectorField::from_components_unchecked(
        out.into_iter()
            .map(|c| ScalarField::spectral_unchecked(g, c))
            .collect(),
    )
}

/// `(Σ|f|^p h^d)^{1/p}` over grid samples, `max|f|` for `p = ∞`. Vector
/// fields use the pointwise Euclidean magnitude.
pub fn lp_norm<F: FieldLike>(f: &F, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::arg(format!("L^p exponent must be >= 1, got {p}")));
    }
    let comps = f.scalar_components();
    let grid = f.grid();
    if comps.len() == 1 {
        return Ok(lp_of_samples(&comps[0].values(), p, grid.cell_volume()));
    }
    let mut mag2 = vec![0.0; grid.len()];
    for c in comps {
        for (m, v) in mag2.iter_mut().zip(c.values().iter()) {
            *m += v * v;
        }
    }
    mag2.iter_mut().for_each(|m| *m = m.sqrt());
    Ok(lp_of_samples(&mag2, p, grid.cell_volume()))
}

pub(crate) fn lp_of_samples(values: &[f64], p: f64, cell: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    if p == 1.0 {
        return values.iter().map(|v| v.abs()).sum::<f64>() * cell;
    }
    if p == 2.0 {
        return (values.iter().map(|v| v * v).sum::<f64>() * cell).sqrt();
    }
    // Scale by the max so large p does not overflow.
    let m = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = values.iter().map(|v| (v.abs() / m).powf(p)).sum();
    m * (s * cell).powf(1.0 / p)
}

/// Translation `f(· − y)` as the spectral phase `e^{−iξ·y}`.
pub fn shift(f: &ScalarField, y: &[f64]) -> ScalarField {
    let g = f.grid();
    let mut c = f.coefficients().into_owned();
    for (i, z) in c.iter_mut().enumerate() {
        let k = g.wavevector(i);
        let phase: f64 = (0..g.dim())
            .map(|a| k[a] as f64 * y.get(a).copied().unwrap_or(0.0))
            .sum();
        *z *= Complex64::from_polar(1.0, -phase);
    }
    // Self-conjugate Nyquist modes only keep the real part of their phase.
    hermitize(&g, &mut c);
    ScalarField::spectral_unchecked(g, c)
}

/// Integral of the pointwise product `∫ f g`.
pub fn inner(f: &ScalarField, g: &ScalarField) -> Result<f64> {
    f.check_grid(g)?;
    let (a, b) = (f.values(), g.values());
    let s: f64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
    Ok(s * f.grid().cell_volume())
}

/// Coefficients of a field re-embedded on `m` points per axis. Modes with a
/// Nyquist component on the source grid are dropped; on truncation, modes
/// that do not fit strictly inside the target band are dropped.
pub(crate) fn resample_coefficients(
    src: &[Complex64],
    dim: usize,
    n: usize,
    m: usize,
) -> Vec<Complex64> {
    let total_m = m.pow(dim as u32);
    let mut out = vec![Complex64::default(); total_m];
    let lim = n.min(m) / 2;
    let total_n = n.pow(dim as u32);
    for (i, z) in src.iter().enumerate().take(total_n) {
        let mut rem = i;
        let mut idx_m = 0usize;
        let mut keep = true;
        let mut mult = 1usize;
        let mut parts = [0usize; 3];
        for a in (0..dim).rev() {
            parts[a] = rem % n;
            rem /= n;
        }
        for a in (0..dim).rev() {
            let k = super::grid::signed_mode(parts[a], n);
            if k.unsigned_abs() as usize >= lim {
                keep = false;
                break;
            }
            let j = if k < 0 {
                (k + m as i64) as usize
            } else {
                k as usize
            };
            idx_m += j * mult;
            mult *= m;
        }
        if keep {
            out[idx_m] = *z;
        }
    }
    out
}

/// Values of a band-limited field on a refined grid with `m` points per axis.
pub(crate) fn upsample_values(f: &ScalarField, m: usize) -> Vec<f64> {
    let g = f.grid();
    let mut c = resample_coefficients(&f.coefficients(), g.dim(), g.points_per_axis(), m);
    fft::fft_nd(&mut c, &vec![m; g.dim()], Direction::Inverse);
    c.into_iter().map(|z| z.re).collect()
}

fn downsample_to_grid(values: Vec<f64>, g: Grid, m: usize) -> ScalarField {
    let mut c: Vec<Complex64> = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let dims = vec![m; g.dim()];
    fft::fft_nd(&mut c, &dims, Direction::Forward);
    let out = resample_coefficients(&c, g.dim(), m, g.points_per_axis());
    ScalarField::spectral_unchecked(g, out)
}

/// Product computed on a 3/2-padded grid and truncated back, so no aliased
/// mode leaks into the retained band. Nyquist modes are dropped.
pub fn dealiased_product(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    f.check_grid(g)?;
    let grid = f.grid();
    let m = 3 * grid.points_per_axis() / 2;
    let a = upsample_values(f, m);
    let b = upsample_values(g, m);
    let prod = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    Ok(downsample_to_grid(prod, grid, m))
}

/// Spectral interpolation of a field onto the grid with twice as many
/// points per axis.
pub fn refine(f: &ScalarField) -> ScalarField {
    let g = f.grid();
    let fine = Grid::new(g.dim(), 2 * g.points_per_axis()).expect("doubled grid is valid");
    let c = resample_coefficients(
        &f.coefficients(),
        g.dim(),
        g.points_per_axis(),
        fine.points_per_axis(),
    );
    ScalarField::spectral_unchecked(fine, c)
}

/// Samples of a field at the points of a coarser grid that divides its own.
pub fn restrict(f: &ScalarField, coarse: Grid) -> Result<ScalarField> {
    let g = f.grid();
    let (n, m) = (coarse.points_per_axis(), g.points_per_axis());
    if coarse.dim() != g.dim() || m % n != 0 {
        return Err(Error::GridMismatch(format!(
            "cannot restrict {m} points to {n}"
        )));
    }
    let r = m / n;
    let values = f.values();
    let out = (0..coarse.len())
        .map(|i| {
            let idx = coarse.multi_index(i);
            let mut fine = [0usize; 3];
            for a in 0..g.dim() {
                fine[a] = r * idx[a];
            }
            values[g.flat_index(fine)]
        })
        .collect();
    Ok(ScalarField::physical_unchecked(coarse, out))
}

/// Grid maximum of `|f|` after 2× spectral oversampling.
pub fn max_abs_oversampled(f: &ScalarField) -> f64 {
    let m = 2 * f.grid().points_per_axis();
    upsample_values(f, m)
        .iter()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}
