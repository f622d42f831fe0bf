//! Mollifier commutators `(fg)^ε − f^ε g^ε`, the kernel-integral form of the
//! commutator, cross-product commutators and their scaling in `ε`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::fields::{
    dealiased_product, fft_nd, lp_norm, refine, restrict, Direction, FieldLike, Grid, ScalarField,
    TimeSeries, VectorField,
};
use crate::mollify::{KernelKind, MollifierKernel};
use crate::quadrature::{bump, mollifier_constant};
use crate::scan::ScaleScan;

/// Commutator field at one `ε`, with its `L^1`, `L^2`, `L^3` and `L^∞` norms.
#[derive(Debug, Clone)]
pub struct CommutatorResult<F> {
    pub field: F,
    pub eps: f64,
    pub norms: Vec<(f64, f64)>,
}

impl<F: FieldLike> CommutatorResult<F> {
    fn new(field: F, eps: f64) -> Result<Self> {
        let norms = [1.0, 2.0, 3.0, f64::INFINITY]
            .iter()
            .map(|&p| lp_norm(&field, p).map(|v| (p, v)))
            .collect::<Result<_>>()?;
        Ok(CommutatorResult { field, eps, norms })
    }

    pub fn norm(&self, p: f64) -> Result<f64> {
        match self.norms.iter().find(|(q, _)| *q == p) {
            Some((_, v)) => Ok(*v),
            None => lp_norm(&self.field, p),
        }
    }
}

/// `(fg)^ε − f^ε g^ε` under a given kernel; both products are dealiased.
pub fn commutator_field(
    f: &ScalarField,
    g: &ScalarField,
    kernel: &MollifierKernel,
) -> Result<ScalarField> {
    f.check_grid(g)?;
    let fg = kernel.apply_scalar(&dealiased_product(f, g)?)?;
    let fe = kernel.apply_scalar(f)?;
    let ge = kernel.apply_scalar(g)?;
    fg.sub(&dealiased_product(&fe, &ge)?)
}

pub fn cet_commutator(
    f: &ScalarField,
    g: &ScalarField,
    eps: f64,
) -> Result<CommutatorResult<ScalarField>> {
    cet_commutator_with(f, g, eps, KernelKind::Lattice)
}

pub fn cet_commutator_with(
    f: &ScalarField,
    g: &ScalarField,
    eps: f64,
    kind: KernelKind,
) -> Result<CommutatorResult<ScalarField>> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch(
            "commutator inputs live on different grids".into(),
        ));
    }
    let kernel = MollifierKernel::new(f.grid(), eps, kind)?;
    CommutatorResult::new(commutator_field(f, g, &kernel)?, eps)
}

/// Both sides of the identity
/// `(fg)^ε − f^ε g^ε = ∫ η_ε(y) δ_y f δ_y g dy − (f − f^ε)(g − g^ε)`,
/// `δ_y f = f(· − y) − f`, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    /// Max-abs difference of the two sides over the grid.
    pub residual: f64,
    /// Max-abs of the commutator itself.
    pub scale: f64,
    pub nodes: usize,
}

/// Default quadrature density of the kernel-integral side.
pub const DEFAULT_NODES_PER_RADIUS: usize = 48;

pub fn cet_decomposition_check(
    f: &ScalarField,
    g: &ScalarField,
    eps: f64,
) -> Result<DecompositionCheck> {
    cet_decomposition_check_with(f, g, eps, DEFAULT_NODES_PER_RADIUS)
}

/// The left side is the exact continuum commutator at the grid points: `fg`
/// is formed without truncation on the doubled grid and mollified there. The
/// right side integrates over a lattice of spacing `ε / nodes_per_radius`
/// using spectral shifts, with `f^ε` taken from the same lattice sums.
pub fn cet_decomposition_check_with(
    f: &ScalarField,
    g: &ScalarField,
    eps: f64,
    nodes_per_radius: usize,
) -> Result<DecompositionCheck> {
    f.check_grid(g)?;
    if nodes_per_radius == 0 {
        return Err(Error::arg("nodes_per_radius must be positive"));
    }
    let grid = f.grid();
    let d = grid.dim();

    let f_fine = refine(f);
    let g_fine = refine(g);
    let fg_fine = f_fine.mul_pointwise(&g_fine)?;
    let fg_eps = restrict(
        &MollifierKernel::continuum(fg_fine.grid(), eps)?.apply_scalar(&fg_fine)?,
        grid,
    )?;
    let cont = MollifierKernel::continuum(grid, eps)?;
    let lhs = fg_eps.sub(
        &cont
            .apply_scalar(f)?
            .mul_pointwise(&cont.apply_scalar(g)?)?,
    )?;

    let hq = eps / nodes_per_radius as f64;
    let c0 = mollifier_constant(d) / eps.powi(d as i32);
    let r = nodes_per_radius as i64;
    let fv = f.values().into_owned();
    let gv = g.values().into_owned();
    let shifter = PairShifter::new(f, g, hq, r);
    let mut buf = Vec::new();
    let mut integral = vec![0.0; grid.len()];
    let mut f_avg = vec![0.0; grid.len()];
    let mut g_avg = vec![0.0; grid.len()];
    let mut nodes = 0usize;
    let z_range = if d == 3 { -r..=r } else { 0..=0 };
    for a in -r..=r {
        for b in -r..=r {
            for c in z_range.clone() {
                let rad = ((a * a + b * b + c * c) as f64).sqrt() * hq / eps;
                if rad >= 1.0 {
                    continue;
                }
                let w = c0 * bump(rad) * hq.powi(d as i32);
                if w == 0.0 {
                    continue;
                }
                nodes += 1;
                shifter.shifted([a, b, c], &mut buf);
                for (i, z) in buf.iter().enumerate() {
                    integral[i] += w * (z.re - fv[i]) * (z.im - gv[i]);
                    f_avg[i] += w * z.re;
                    g_avg[i] += w * z.im;
                }
            }
        }
    }
    let mut residual = 0.0f64;
    let lv = lhs.values();
    for i in 0..grid.len() {
        let rhs = integral[i] - (fv[i] - f_avg[i]) * (gv[i] - g_avg[i]);
        residual = residual.max((lv[i] - rhs).abs());
    }
    Ok(DecompositionCheck {
        residual,
        scale: lhs.max_abs(),
        nodes,
    })
}

/// Samples of `f(· − y)` and `g(· − y)` packed as real and imaginary parts,
/// for `y` on the lattice `hq ℤ^d`.
struct PairShifter {
    grid: Grid,
    coeffs: Vec<Complex64>,
    f: Vec<Complex64>,
    g: Vec<Complex64>,
    radius: i64,
    phases: Vec<Complex64>,
    nyquist_pairs: Vec<(usize, usize)>,
}

impl PairShifter {
    fn new(f: &ScalarField, g: &ScalarField, hq: f64, radius: i64) -> Self {
        let grid = f.grid();
        let n = grid.points_per_axis();
        let fc = f.coefficients().into_owned();
        let gc = g.coefficients().into_owned();
        let coeffs = fc
            .iter()
            .zip(&gc)
            .map(|(a, b)| a + Complex64::i() * b)
            .collect();
        let mut phases = Vec::with_capacity((2 * radius as usize + 1) * n);
        for a in -radius..=radius {
            for m in 0..n {
                phases.push(Complex64::from_polar(
                    1.0,
                    -(grid.wavenumber(m) * a) as f64 * hq,
                ));
            }
        }
        let mut nyquist_pairs = Vec::new();
        for flat in 0..grid.len() {
            let m = grid.multi_index(flat);
            if !(0..grid.dim()).any(|a| m[a] == n / 2) {
                continue;
            }
            let mut neg = [0usize; 3];
            for a in 0..grid.dim() {
                neg[a] = (n - m[a]) % n;
            }
            let partner = grid.flat_index(neg);
            if partner >= flat {
                nyquist_pairs.push((flat, partner));
            }
        }
        PairShifter {
            grid,
            coeffs,
            f: fc,
            g: gc,
            radius,
            phases,
            nyquist_pairs,
        }
    }

    fn phase(&self, flat: usize, node: [i64; 3]) -> Complex64 {
        let n = self.grid.points_per_axis();
        let m = self.grid.multi_index(flat);
        (0..self.grid.dim())
            .map(|a| self.phases[(node[a] + self.radius) as usize * n + m[a]])
            .product()
    }

    fn shifted(&self, node: [i64; 3], buf: &mut Vec<Complex64>) {
        let n = self.grid.points_per_axis();
        let row = |a: usize| &self.phases[(node[a] + self.radius) as usize * n..][..n];
        buf.clear();
        buf.extend_from_slice(&self.coeffs);
        match self.grid.dim() {
            2 => {
                let (p0, p1) = (row(0), row(1));
                for (m0, line) in buf.chunks_mut(n).enumerate() {
                    for (z, p) in line.iter_mut().zip(p1) {
                        *z *= p0[m0] * p;
                    }
                }
            }
            _ => {
                let (p0, p1, p2) = (row(0), row(1), row(2));
                for (m01, line) in buf.chunks_mut(n).enumerate() {
                    let outer = p0[m01 / n] * p1[m01 % n];
                    for (z, p) in line.iter_mut().zip(p2) {
                        *z *= outer * p;
                    }
                }
            }
        }
        // Self-conjugate Nyquist modes only keep the real part of their phase.
        for &(flat, partner) in &self.nyquist_pairs {
            let (pf, pp) = (self.phase(flat, node), self.phase(partner, node));
            let fh = 0.5 * (self.f[flat] * pf + (self.f[partner] * pp).conj());
            let gh = 0.5 * (self.g[flat] * pf + (self.g[partner] * pp).conj());
            buf[flat] = fh + Complex64::i() * gh;
            buf[partner] = fh.conj() + Complex64::i() * gh.conj();
        }
        fft_nd(buf, &vec![n; self.grid.dim()], Direction::Inverse);
    }
}

/// `(f × g)^ε − f^ε × g^ε`, each entry a difference of scalar commutators.
pub fn cross_commutator(
    f: &VectorField,
    g: &VectorField,
    eps: f64,
) -> Result<CommutatorResult<VectorField>> {
    cross_commutator_with(f, g, eps, KernelKind::Lattice)
}

pub fn cross_commutator_with(
    f: &VectorField,
    g: &VectorField,
    eps: f64,
    kind: KernelKind,
) -> Result<CommutatorResult<VectorField>> {
    if f.dim() != 3 || g.dim() != 3 {
        return Err(Error::arg(
            "the vector cross commutator needs three-dimensional fields",
        ));
    }
    f.check_shape(g)?;
    let kernel = MollifierKernel::new(f.grid(), eps, kind)?;
    let c = |j: usize, k: usize| commutator_field(f.component(j), g.component(k), &kernel);
    let comps = vec![
        c(1, 2)?.sub(&c(2, 1)?)?,
        c(2, 0)?.sub(&c(0, 2)?)?,
        c(0, 1)?.sub(&c(1, 0)?)?,
    ];
    CommutatorResult::new(VectorField::from_components_unchecked(comps), eps)
}

/// Two-dimensional scalar cross product commutator, `f₁g₂ − f₂g₁`.
pub fn cross_commutator_2d(
    f: &VectorField,
    g: &VectorField,
    eps: f64,
    kind: KernelKind,
) -> Result<CommutatorResult<ScalarField>> {
    if f.dim() != 2 || g.dim() != 2 {
        return Err(Error::arg(
            "the scalar cross commutator needs two-dimensional fields",
        ));
    }
    f.check_shape(g)?;
    let kernel = MollifierKernel::new(f.grid(), eps, kind)?;
    let a = commutator_field(f.component(0), g.component(1), &kernel)?;
    let b = commutator_field(f.component(1), g.component(0), &kernel)?;
    CommutatorResult::new(a.sub(&b)?, eps)
}

/// Smallest scan length for which a slope is fitted.
pub const MIN_SCAN_POINTS: usize = 4;

/// `‖(fg)^ε − f^ε g^ε‖_{L^p}` over `scales`, compensated by `ε^{expected}`.
pub fn commutator_scaling_scan(
    f: &ScalarField,
    g: &ScalarField,
    scales: &[f64],
    p: f64,
    kind: KernelKind,
    expected_exponent: Option<f64>,
) -> Result<ScaleScan> {
    if scales.len() < MIN_SCAN_POINTS {
        return Err(Error::arg(format!(
            "commutator scan needs at least {MIN_SCAN_POINTS} scales, got {}",
            scales.len()
        )));
    }
    let f = f.to_spectral();
    let g = g.to_spectral();
    let values = scales
        .iter()
        .map(|&eps| cet_commutator_with(&f, &g, eps, kind)?.norm(p))
        .collect::<Result<Vec<_>>>()?;
    ScaleScan::new(scales, &values, expected_exponent)
}

/// `(∫ |x(t)|^p dt)^{1/p}` with trapezoid weights; `max |x|` for `p = ∞`.
pub fn time_norm(times: &[f64], values: &[f64], p: f64) -> Result<f64> {
    if times.len() != values.len() || times.is_empty() {
        return Err(Error::arg("time norm needs matching, nonempty lists"));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    if times.len() == 1 {
        return Ok(values[0].abs());
    }
    let mut s = 0.0;
    for k in 0..times.len() - 1 {
        let dt = times[k + 1] - times[k];
        s += 0.5 * dt * (values[k].abs().powf(p) + values[k + 1].abs().powf(p));
    }
    Ok(s.powf(1.0 / p))
}

/// Scan of the composite norm `‖·‖_{L^{p_time}(0,T; L^{q_space})}` of the
/// commutator of two time series sampled at the same times.
pub fn commutator_scaling_scan_series(
    f: &TimeSeries<ScalarField>,
    g: &TimeSeries<ScalarField>,
    scales: &[f64],
    p_time: f64,
    q_space: f64,
    kind: KernelKind,
    expected_exponent: Option<f64>,
) -> Result<ScaleScan> {
    if scales.len() < MIN_SCAN_POINTS {
        return Err(Error::arg(format!(
            "commutator scan needs at least {MIN_SCAN_POINTS} scales, got {}",
            scales.len()
        )));
    }
    if f.times() != g.times() {
        return Err(Error::arg("time series are sampled at different times"));
    }
    let values = scales
        .iter()
        .map(|&eps| {
            let per: Vec<f64> = f
                .snapshots()
                .iter()
                .zip(g.snapshots())
                .map(|(a, b)| cet_commutator_with(a, b, eps, kind)?.norm(q_space))
                .collect::<Result<_>>()?;
            time_norm(f.times(), &per, p_time)
        })
        .collect::<Result<Vec<_>>>()?;
    ScaleScan::new(scales, &values, expected_exponent)
}

/// Which Sobolev-embedding variant of the commutator estimate is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingCase {
    /// Both factors enter through their gradients: `1/q = 1/q₁ + 1/q₂ − 2/d`.
    BothGradients,
    /// One factor enters through its gradient: `1/q = 1/q₁ + 1/q₂ − 1/d`.
    OneGradient,
}

/// Spatial exponent in which the commutator is measured for an embedding case.
pub fn embedded_exponent(q1: f64, q2: f64, dim: usize, case: EmbeddingCase) -> Result<f64> {
    let shift = match case {
        EmbeddingCase::BothGradients => 2.0,
        EmbeddingCase::OneGradient => 1.0,
    } / dim as f64;
    let inv = 1.0 / q1 + 1.0 / q2 - shift;
    if !(inv > 0.0 && inv <= 1.0) {
        return Err(Error::arg(format!(
            "embedded exponent 1/q = {inv} outside (0, 1]"
        )));
    }
    Ok(1.0 / inv)
}
