use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_scales, require_dim, DefectReport, TermId, TermValue};
use crate::commutator::commutator_field;
use crate::error::{Error, Result};
use crate::fields::{apply_multiplier, derivative, inner, ScalarField, VectorField};
use crate::mollify::{KernelKind, MollifierKernel};

/// Means at or below this are treated as roundoff and not reported.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// Riesz transform `𝓡_j`, the multiplier `−iξ_j/|ξ|` with the mean mode
/// sent to zero.
pub fn riesz(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    let g = f.grid();
    if axis >= g.dim() {
        return Err(Error::arg(format!(
            "axis {axis} out of range for dimension {}",
            g.dim()
        )));
    }
    Ok(apply_multiplier(f, |i| {
        let k2 = g.wavenumber_sq(i);
        if k2 == 0 {
            return Complex64::default();
        }
        let xi = g.derivative_wavevector(i)[axis];
        Complex64::new(0.0, -xi / (k2 as f64).sqrt())
    }))
}

/// `v = (−𝓡₂θ, 𝓡₁θ)`.
pub fn sqg_velocity(theta: &ScalarField) -> Result<VectorField> {
    require_dim(theta.grid().dim(), 2, "SQG velocity")?;
    let theta = theta.to_spectral();
    Ok(VectorField::from_components_unchecked(vec![
        riesz(&theta, 1)?.scale(-1.0),
        riesz(&theta, 0)?,
    ]))
}

/// `∫ θ ∂_iθ`.
pub fn sqg_helicity(theta: &ScalarField, axis: usize) -> Result<f64> {
    require_dim(theta.grid().dim(), 2, "SQG helicity")?;
    inner(theta, &derivative(theta, axis)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqgTerms {
    pub eps: f64,
    pub i: TermValue,
    pub ii: TermValue,
    pub iii: TermValue,
    /// Mean of the input, removed before evaluation when nonzero.
    pub removed_mean: Option<f64>,
}

impl SqgTerms {
    pub fn terms(&self) -> [(TermId, &TermValue); 3] {
        [
            (TermId::SqgI, &self.i),
            (TermId::SqgII, &self.ii),
            (TermId::SqgIII, &self.iii),
        ]
    }
}

pub fn sqg_defect_terms(theta: &ScalarField, eps: f64, axis: usize) -> Result<SqgTerms> {
    sqg_defect_terms_with(theta, eps, axis, KernelKind::Lattice)
}

/// Integrands, summed over `j`:
/// - `I = ∂_jθ^ε [(∂_iv_j θ)^ε − ∂_iv_j^ε θ^ε]`
/// - `II = [(v_j ∂_iθ)^ε − v_j^ε ∂_iθ^ε] ∂_jθ^ε`
/// - `III = [(v_j θ)^ε − θ^ε v_j^ε] ∂_i∂_jθ^ε`
///
/// Since `∂_i` distributes over the commutator, `I + II + III` integrates to
/// zero.
pub fn sqg_defect_terms_with(
    theta: &ScalarField,
    eps: f64,
    axis: usize,
    kind: KernelKind,
) -> Result<SqgTerms> {
    require_dim(theta.grid().dim(), 2, "SQG defect terms")?;
    if axis >= 2 {
        return Err(Error::arg(format!(
            "axis {axis} out of range for dimension 2"
        )));
    }
    let theta = theta.to_spectral();
    let grid = theta.grid();
    let mean = theta.mean();
    let mut c = theta.into_coefficients();
    c[0] = Complex64::default();
    let theta = ScalarField::spectral_unchecked(grid, c);
    let removed_mean = (mean.abs() > MEAN_TOLERANCE).then_some(mean);
    let kernel = MollifierKernel::new(grid, eps, kind)?;
    let v = sqg_velocity(&theta)?;
    let te = kernel.apply_scalar(&theta)?;
    let dti = derivative(&theta, axis)?;
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    let mut d3 = Vec::new();
    for j in 0..2 {
        let vj = v.component(j);
        let dte_j = derivative(&te, j)?;
        let ddte = derivative(&dte_j, axis)?;
        let c1 = commutator_field(&derivative(vj, axis)?, &theta, &kernel)?;
        let c2 = commutator_field(vj, &dti, &kernel)?;
        let c3 = commutator_field(vj, &theta, &kernel)?;
        d1.push(dte_j.mul_pointwise(&c1)?);
        d2.push(c2.mul_pointwise(&dte_j)?);
        d3.push(c3.mul_pointwise(&ddte)?);
    }
    let sum = |d: Vec<ScalarField>| d[0].add(&d[1]);
    Ok(SqgTerms {
        eps,
        i: TermValue::from_densities(&[sum(d1)?]),
        ii: TermValue::from_densities(&[sum(d2)?]),
        iii: TermValue::from_densities(&[sum(d3)?]),
        removed_mean,
    })
}

/// Reports for `I`, `II`, `III` over `scales`.
pub fn sqg_defect_scan(
    theta: &ScalarField,
    scales: &[f64],
    axis: usize,
    kind: KernelKind,
    expected: Option<f64>,
) -> Result<Vec<DefectReport>> {
    check_scales(scales)?;
    let theta = theta.to_spectral();
    let per: Vec<SqgTerms> = scales
        .iter()
        .map(|&e| sqg_defect_terms_with(&theta, e, axis, kind))
        .collect::<Result<_>>()?;
    let notes = match per[0].removed_mean {
        Some(m) => vec![format!("mean {m:e} removed before evaluation")],
        None => Vec::new(),
    };
    [TermId::SqgI, TermId::SqgII, TermId::SqgIII]
        .iter()
        .enumerate()
        .map(|(k, &id)| {
            let values = per.iter().map(|p| p.terms()[k].1.clone()).collect();
            DefectReport::build(id, scales, values, expected, notes.clone())
        })
        .collect()
}
