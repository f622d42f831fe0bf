use serde::{Deserialize, Serialize};

use super::{check_density, check_scales, DefectReport, PressureLaw, TermId, TermValue};
use crate::commutator::commutator_field;
use crate::error::{Error, Result};
use crate::fields::{
    dealiased_product, derivative, divergence, gradient, lp_norm, ScalarField, VectorField,
};
use crate::mollify::{KernelKind, MollifierKernel};

/// The terms `I₁ … I₄` at one `ε`. With a scalar test function `φ`, each
/// term is a vector whose `i`-th entry uses the test field `φ e_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressibleDefects {
    pub eps: f64,
    pub i1: TermValue,
    pub i2: TermValue,
    pub i3: TermValue,
    pub i4: TermValue,
}

impl CompressibleDefects {
    pub fn terms(&self) -> [(TermId, &TermValue); 4] {
        [
            (TermId::I1, &self.i1),
            (TermId::I2, &self.i2),
            (TermId::I3, &self.i3),
            (TermId::I4, &self.i4),
        ]
    }
}

pub fn compressible_defects(
    rho: &ScalarField,
    v: &VectorField,
    law: &PressureLaw,
    eps: f64,
    test_fn: Option<&ScalarField>,
) -> Result<CompressibleDefects> {
    compressible_defects_with(rho, v, law, eps, test_fn, KernelKind::Lattice)
}

/// Integrands, with `C = (ρv)^ε − ρ^ε v^ε`, `T = (ρv⊗v)^ε − (ρv)^ε⊗v^ε`,
/// `P = π(ρ^ε) − π(ρ)^ε`:
/// - `I₁_i = −(φ/ρ^ε) C_j ∂_j v_i^ε`
/// - `I₂_i = C_i φ div(ρv)^ε / (ρ^ε)²`
/// - `I₃_i = T_ij (∂_jφ/ρ^ε − φ ∂_jρ^ε/(ρ^ε)²)`
/// - `I₄_i = P (∂_iφ/ρ^ε − φ ∂_iρ^ε/(ρ^ε)²)`
pub fn compressible_defects_with(
    rho: &ScalarField,
    v: &VectorField,
    law: &PressureLaw,
    eps: f64,
    test_fn: Option<&ScalarField>,
    kind: KernelKind,
) -> Result<CompressibleDefects> {
    check_density(rho)?;
    let grid = rho.grid();
    if v.grid() != grid || test_fn.is_some_and(|t| t.grid() != grid) {
        return Err(Error::GridMismatch(
            "density, velocity and test function must share a grid".into(),
        ));
    }
    let d = grid.dim();
    let kernel = MollifierKernel::new(grid, eps, kind)?;
    let phi = match test_fn {
        Some(t) => t.to_physical(),
        None => ScalarField::constant(grid, 1.0),
    };
    let dphi = gradient(&phi).to_physical();

    let rho_s = rho.to_spectral();
    let v = v.to_spectral();
    let re = kernel.apply_scalar(&rho_s)?.to_physical();
    check_density(&re)?;
    let ve = kernel.apply(&v)?;
    let dre = gradient(&re).to_physical();
    let inv = re.map(|r| 1.0 / r);
    let inv2 = re.map(|r| 1.0 / (r * r));

    let m: Vec<ScalarField> = v
        .components()
        .iter()
        .map(|c| dealiased_product(&rho_s, c))
        .collect::<Result<_>>()?;
    let c: Vec<ScalarField> = v
        .components()
        .iter()
        .map(|c| commutator_field(&rho_s, c, &kernel))
        .collect::<Result<_>>()?;
    let div_m = kernel.apply_scalar(&divergence(&VectorField::from_components_unchecked(
        m.clone(),
    )))?;

    // Weight w_j = ∂_jφ/ρ^ε − φ∂_jρ^ε/(ρ^ε)², shared by I₃ and I₄.
    let w: Vec<ScalarField> = (0..d)
        .map(|j| {
            let a = dphi.component(j).mul_pointwise(&inv)?;
            let b = phi.mul_pointwise(dre.component(j))?.mul_pointwise(&inv2)?;
            a.sub(&b)
        })
        .collect::<Result<_>>()?;

    let phi_inv = phi.mul_pointwise(&inv)?;
    let i2_weight = phi.mul_pointwise(&div_m)?.mul_pointwise(&inv2)?;
    let mut i1 = Vec::with_capacity(d);
    let mut i2 = Vec::with_capacity(d);
    let mut i3 = Vec::with_capacity(d);
    for i in 0..d {
        let mut a = ScalarField::zeros(grid);
        let mut t_acc = ScalarField::zeros(grid);
        for j in 0..d {
            a = a.add(&c[j].mul_pointwise(&derivative(ve.component(i), j)?)?)?;
            let t = commutator_field(&m[i], v.component(j), &kernel)?;
            t_acc = t_acc.add(&t.mul_pointwise(&w[j])?)?;
        }
        i1.push(a.mul_pointwise(&phi_inv)?.scale(-1.0));
        i2.push(c[i].mul_pointwise(&i2_weight)?);
        i3.push(t_acc);
    }

    let pe = kernel.apply_scalar(&rho.to_physical().map(|r| law.pressure(r)))?;
    let p = re.map(|r| law.pressure(r)).sub(&pe)?;
    let i4: Vec<ScalarField> = w
        .iter()
        .map(|wj| p.mul_pointwise(wj))
        .collect::<Result<_>>()?;

    Ok(CompressibleDefects {
        eps,
        i1: TermValue::from_densities(&i1),
        i2: TermValue::from_densities(&i2),
        i3: TermValue::from_densities(&i3),
        i4: TermValue::from_densities(&i4),
    })
}

/// Note recorded when `ρ` leaves the declared bounds `[c₁, c₂]`.
pub fn density_bounds_note(rho: &ScalarField, bounds: Option<(f64, f64)>) -> Vec<String> {
    match bounds {
        Some((c1, c2)) if rho.min() < c1 || rho.max() > c2 => vec![format!(
            "density range [{:.6}, {:.6}] leaves the declared bounds [{c1}, {c2}]",
            rho.min(),
            rho.max()
        )],
        _ => Vec::new(),
    }
}

/// Reports for `I₁ … I₄` over `scales`.
pub fn compressible_defect_scan(
    rho: &ScalarField,
    v: &VectorField,
    law: &PressureLaw,
    scales: &[f64],
    test_fn: Option<&ScalarField>,
    bounds: Option<(f64, f64)>,
    kind: KernelKind,
) -> Result<Vec<DefectReport>> {
    check_scales(scales)?;
    let per: Vec<CompressibleDefects> = scales
        .iter()
        .map(|&e| compressible_defects_with(rho, v, law, e, test_fn, kind))
        .collect::<Result<_>>()?;
    let notes = density_bounds_note(rho, bounds);
    let ids = [TermId::I1, TermId::I2, TermId::I3, TermId::I4];
    ids.iter()
        .enumerate()
        .map(|(k, &id)| {
            let values = per.iter().map(|p| p.terms()[k].1.clone()).collect();
            DefectReport::build(id, scales, values, None, notes.clone())
        })
        .collect()
}

/// Both sides of `|π(ρ^ε) − π^ε(ρ)| ≤ C|ρ^ε − ρ|² + C((ρ(·) − ρ(x))² ∗ η_ε)`
/// in `L^{3/2}`, with `C = max |π″| / 2` on `[c₁, c₂]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureCheck {
    pub eps: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub holds: bool,
}

/// Relative slack allowed in `lhs ≤ rhs`.
pub const PRESSURE_CHECK_SLACK: f64 = 1e-6;

/// Uses the lattice kernel, whose weights are positive, so both sides are
/// exact finite averages over grid points. `bounds` defaults to the sampled
/// range of `ρ`.
pub fn pressure_commutator_check(
    rho: &ScalarField,
    law: &PressureLaw,
    eps: f64,
    bounds: Option<(f64, f64)>,
) -> Result<PressureCheck> {
    check_density(rho)?;
    let (c1, c2) = bounds.unwrap_or((rho.min(), rho.max()));
    if !(c1 > 0.0 && c1 <= c2) {
        return Err(Error::arg(format!(
            "density bounds [{c1}, {c2}] must satisfy 0 < c1 <= c2"
        )));
    }
    let constant = 0.5 * law.max_curvature(c1, c2);
    let kernel = MollifierKernel::lattice(rho.grid(), eps)?;
    let r = rho.to_physical();
    let re = kernel.apply_scalar(&r)?.to_physical();
    let pe = kernel
        .apply_scalar(&r.map(|x| law.pressure(x)))?
        .to_physical();
    let r2e = kernel.apply_scalar(&r.map(|x| x * x))?.to_physical();
    let lhs_f = re.map(|x| law.pressure(x)).sub(&pe)?;
    let (rv, rev, r2v) = (r.values(), re.values(), r2e.values());
    let rhs_v: Vec<f64> = (0..rv.len())
        .map(|i| {
            let local = (rev[i] - rv[i]).powi(2);
            let spread = (r2v[i] - 2.0 * rv[i] * rev[i] + rv[i] * rv[i]).max(0.0);
            constant * (local + spread)
        })
        .collect();
    let lhs = lp_norm(&lhs_f, 1.5)?;
    let rhs = lp_norm(&ScalarField::physical_unchecked(rho.grid(), rhs_v), 1.5)?;
    Ok(PressureCheck {
        eps,
        lhs,
        rhs,
        constant,
        holds: lhs <= rhs * (1.0 + PRESSURE_CHECK_SLACK),
    })
}

/// `L^{3/2}` size of `π(ρ^ε) − π^ε(ρ)` over `scales`.
pub fn pressure_commutator_scan(
    rho: &ScalarField,
    law: &PressureLaw,
    scales: &[f64],
    bounds: Option<(f64, f64)>,
) -> Result<(DefectReport, Vec<PressureCheck>)> {
    check_scales(scales)?;
    let checks: Vec<PressureCheck> = scales
        .iter()
        .map(|&e| pressure_commutator_check(rho, law, e, bounds))
        .collect::<Result<_>>()?;
    let values = checks
        .iter()
        .map(|c| TermValue {
            integral: vec![c.lhs],
            value: c.lhs,
            magnitude: c.lhs,
        })
        .collect();
    let mut notes = density_bounds_note(rho, bounds);
    if checks.iter().any(|c| !c.holds) {
        notes.push("majorant violated at some scale".into());
    }
    let report = DefectReport::build(TermId::PressureCommutator, scales, values, Some(2.0), notes)?;
    Ok((report, checks))
}
