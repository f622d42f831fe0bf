//! Helicity, energy and the defect terms whose vanishing as `ε → 0` yields
//! helicity conservation for incompressible Euler, compressible Euler and SQG.

mod compressible;
mod criteria;
mod sqg;

pub use compressible::{
    compressible_defect_scan, compressible_defects, compressible_defects_with, density_bounds_note,
    pressure_commutator_check, pressure_commutator_scan, CompressibleDefects, PressureCheck,
};
pub use criteria::{
    criteria_evaluator, BesovMeasurement, ClauseVerdict, LebesgueMeasurement, RegularitySummary,
    Summability, TheoremId, Verdict, CRITERIA_TOLERANCE,
};
pub use sqg::{
    riesz, sqg_defect_scan, sqg_defect_terms, sqg_defect_terms_with, sqg_helicity, sqg_velocity,
    SqgTerms, MEAN_TOLERANCE,
};

use serde::{Deserialize, Serialize};

use crate::commutator::{commutator_field, cross_commutator_with};
use crate::error::{Error, Result};
use crate::fields::{curl3, derivative, inner, lp_norm, ScalarField, VectorField};
use crate::fit::Trend;
use crate::mollify::{KernelKind, MollifierKernel};
use crate::scan::ScaleScan;

/// Isentropic law `π(ρ) = κρ^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureLaw {
    pub kappa: f64,
    pub gamma: f64,
}

impl PressureLaw {
    pub fn new(kappa: f64, gamma: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::arg(format!("kappa must be positive, got {kappa}")));
        }
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::arg(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(PressureLaw { kappa, gamma })
    }

    /// `κ = (γ−1)²/(4γ)`.
    pub fn isentropic(gamma: f64) -> Result<Self> {
        PressureLaw::new((gamma - 1.0).powi(2) / (4.0 * gamma), gamma)
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma)
    }

    pub fn dpressure(&self, rho: f64) -> f64 {
        self.kappa * self.gamma * rho.powf(self.gamma - 1.0)
    }

    pub fn d2pressure(&self, rho: f64) -> f64 {
        self.kappa * self.gamma * (self.gamma - 1.0) * rho.powf(self.gamma - 2.0)
    }

    /// `Π(ρ) = ∫₁^ρ π′(s)/s ds = κγ/(γ−1)·(ρ^{γ−1} − 1)`.
    pub fn enthalpy(&self, rho: f64) -> f64 {
        self.kappa * self.gamma / (self.gamma - 1.0) * (rho.powf(self.gamma - 1.0) - 1.0)
    }

    /// `max |π″|` on `[c₁, c₂]`; `π″` is monotone so the endpoints suffice.
    pub fn max_curvature(&self, c1: f64, c2: f64) -> f64 {
        self.d2pressure(c1).abs().max(self.d2pressure(c2).abs())
    }
}

fn require_dim(dim: usize, want: usize, what: &str) -> Result<()> {
    if dim != want {
        return Err(Error::arg(format!(
            "{what} needs dimension {want}, got {dim}"
        )));
    }
    Ok(())
}

/// `∫ ω·v` with `ω = curl v`.
pub fn helicity(v: &VectorField) -> Result<f64> {
    require_dim(v.dim(), 3, "helicity")?;
    let w = curl3(v)?;
    (0..3).map(|i| inner(w.component(i), v.component(i))).sum()
}

/// `½ ∫ |v|²`.
pub fn energy(v: &VectorField) -> Result<f64> {
    let s: Result<f64> = v.components().iter().map(|c| inner(c, c)).sum();
    Ok(0.5 * s?)
}

pub(crate) fn check_density(rho: &ScalarField) -> Result<()> {
    let m = rho.min();
    if !(m > 0.0) {
        return Err(Error::Domain { min_rho: m });
    }
    Ok(())
}

/// `∫ ½ρ|v|² + κρ^γ/(γ−1)`.
pub fn compressible_energy(rho: &ScalarField, v: &VectorField, law: &PressureLaw) -> Result<f64> {
    check_density(rho)?;
    if rho.grid() != v.grid() {
        return Err(Error::GridMismatch(
            "density and velocity live on different grids".into(),
        ));
    }
    let r = rho.values();
    let speed2 = v.dot_pointwise(v)?;
    let s2 = speed2.values();
    let internal = law.kappa / (law.gamma - 1.0);
    let s: f64 = r
        .iter()
        .zip(s2.iter())
        .map(|(r, s)| 0.5 * r * s + internal * r.powf(law.gamma))
        .sum();
    Ok(s * rho.grid().cell_volume())
}

/// Value of a defect term at one `ε`: the integral of each component of its
/// integrand, their Euclidean norm, and the `L^1` norm of the integrand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermValue {
    pub integral: Vec<f64>,
    pub value: f64,
    pub magnitude: f64,
}

impl TermValue {
    pub(crate) fn from_densities(densities: &[ScalarField]) -> TermValue {
        let grid = densities[0].grid();
        let cell = grid.cell_volume();
        let vals: Vec<_> = densities.iter().map(|d| d.values().into_owned()).collect();
        let integral: Vec<f64> = vals.iter().map(|v| v.iter().sum::<f64>() * cell).collect();
        let value = integral.iter().map(|x| x * x).sum::<f64>().sqrt();
        let magnitude = (0..grid.len())
            .map(|i| vals.iter().map(|v| v[i] * v[i]).sum::<f64>().sqrt())
            .sum::<f64>()
            * cell;
        TermValue {
            integral,
            value,
            magnitude,
        }
    }
}

/// Integrand of `2∫((v⊗v)^ε − v^ε⊗v^ε) : ∇ω^ε`, the rate of change of the
/// mollified helicity `∫ v^ε·ω^ε` along an Euler flow.
pub fn helicity_flux_density(v: &VectorField, eps: f64, kind: KernelKind) -> Result<ScalarField> {
    require_dim(v.dim(), 3, "helicity flux")?;
    let kernel = MollifierKernel::new(v.grid(), eps, kind)?;
    let v = v.to_spectral();
    let we = kernel.apply(&curl3(&v)?)?;
    let mut acc = ScalarField::zeros(v.grid());
    for i in 0..3 {
        for j in i..3 {
            let t = commutator_field(v.component(i), v.component(j), &kernel)?;
            let mut g = derivative(we.component(i), j)?;
            if i != j {
                g = g.add(&derivative(we.component(j), i)?)?;
            }
            acc = acc.add(&t.mul_pointwise(&g)?)?;
        }
    }
    Ok(acc.scale(2.0))
}

/// Signed helicity flux defect at scale `ε`, lattice kernel.
pub fn helicity_flux_defect(v: &VectorField, eps: f64) -> Result<f64> {
    Ok(helicity_flux_density(v, eps, KernelKind::Lattice)?.integral())
}

pub fn helicity_flux_term(v: &VectorField, eps: f64, kind: KernelKind) -> Result<TermValue> {
    Ok(TermValue::from_densities(&[helicity_flux_density(
        v, eps, kind,
    )?]))
}

/// `‖curl((v×ω)^ε) − curl(v^ε×ω^ε)‖_{L^{3/2}}`.
pub fn vorticity_transport_residual(v: &VectorField, eps: f64) -> Result<f64> {
    vorticity_transport_residual_with(v, eps, KernelKind::Lattice)
}

pub fn vorticity_transport_residual_with(
    v: &VectorField,
    eps: f64,
    kind: KernelKind,
) -> Result<f64> {
    require_dim(v.dim(), 3, "vorticity transport")?;
    let v = v.to_spectral();
    let w = curl3(&v)?;
    let c = cross_commutator_with(&v, &w, eps, kind)?;
    lp_norm(&curl3(&c.field)?, 1.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermId {
    HelicityFlux,
    VorticityTransport,
    I1,
    I2,
    I3,
    I4,
    #[serde(rename = "SQG_I")]
    SqgI,
    #[serde(rename = "SQG_II")]
    SqgII,
    #[serde(rename = "SQG_III")]
    SqgIII,
    PressureCommutator,
}

impl TermId {
    pub fn as_str(&self) -> &'static str {
        match self {
            TermId::HelicityFlux => "HelicityFlux",
            TermId::VorticityTransport => "VorticityTransport",
            TermId::I1 => "I1",
            TermId::I2 => "I2",
            TermId::I3 => "I3",
            TermId::I4 => "I4",
            TermId::SqgI => "SQG_I",
            TermId::SqgII => "SQG_II",
            TermId::SqgIII => "SQG_III",
            TermId::PressureCommutator => "PressureCommutator",
        }
    }
}

/// Magnitudes at or below this count as exactly zero.
pub const VANISHING_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DefectVerdict {
    Trend {
        trend: Trend,
    },
    /// Every sample is below [`VANISHING_TOLERANCE`].
    VanishesIdentically,
    /// Too few positive samples to fit.
    Undetermined,
}

impl DefectVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            DefectVerdict::Trend { trend } => trend.as_str(),
            DefectVerdict::VanishesIdentically => "vanishes_identically",
            DefectVerdict::Undetermined => "undetermined",
        }
    }
}

/// Scan of one defect term. The fitted quantity is the `L^1` magnitude of
/// the integrand; the integrals themselves are kept alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub term_id: TermId,
    pub scan: ScaleScan,
    pub integrals: Vec<Vec<f64>>,
    pub verdict: DefectVerdict,
    pub notes: Vec<String>,
}

impl DefectReport {
    /// Report from per-scale term values; `expected` defaults to 0.
    pub fn build(
        term_id: TermId,
        scales: &[f64],
        values: Vec<TermValue>,
        expected: Option<f64>,
        notes: Vec<String>,
    ) -> Result<DefectReport> {
        let mags: Vec<f64> = values.iter().map(|v| v.magnitude).collect();
        let scan = ScaleScan::new(scales, &mags, Some(expected.unwrap_or(0.0)))?;
        let mut order: Vec<usize> = (0..scales.len()).collect();
        order.sort_by(|&a, &b| scales[b].total_cmp(&scales[a]));
        let integrals = order.iter().map(|&i| values[i].integral.clone()).collect();
        let verdict = if mags.iter().all(|m| *m <= VANISHING_TOLERANCE) {
            DefectVerdict::VanishesIdentically
        } else {
            match scan.trend {
                Some(trend) => DefectVerdict::Trend { trend },
                None => DefectVerdict::Undetermined,
            }
        };
        Ok(DefectReport {
            term_id,
            scan,
            integrals,
            verdict,
            notes,
        })
    }

    pub fn slope(&self) -> Option<f64> {
        self.scan.slope()
    }

    /// `{term_id, scan: [{eps, value}], fit: {slope, r2, window}, verdict}`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .scan
            .rows()
            .zip(&self.integrals)
            .map(|((eps, value, compensated), integral)| {
                serde_json::json!({ "eps": eps, "value": value, "compensated": compensated, "integral": integral })
            })
            .collect();
        let fit = match self.scan.fit {
            Some(f) => serde_json::json!({
                "slope": f.slope,
                "r2": f.r_squared,
                "window": [self.scan.window.0, self.scan.window.1],
            }),
            None => serde_json::Value::Null,
        };
        serde_json::json!({
            "term_id": self.term_id.as_str(),
            "scan": rows,
            "fit": fit,
            "expected_exponent": self.scan.expected_exponent,
            "verdict": self.verdict.as_str(),
            "notes": self.notes,
        })
    }
}

pub(crate) fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::arg("defect scan needs at least one scale"));
    }
    Ok(())
}

/// Helicity flux over `scales`; `expected` defaults to 0, the `o(1)` rate.
pub fn helicity_flux_scan(
    v: &VectorField,
    scales: &[f64],
    kind: KernelKind,
    expected: Option<f64>,
) -> Result<DefectReport> {
    check_scales(scales)?;
    let v = v.to_spectral();
    let values = scales
        .iter()
        .map(|&e| helicity_flux_term(&v, e, kind))
        .collect::<Result<Vec<_>>>()?;
    DefectReport::build(TermId::HelicityFlux, scales, values, expected, Vec::new())
}

pub fn vorticity_transport_scan(
    v: &VectorField,
    scales: &[f64],
    kind: KernelKind,
    expected: Option<f64>,
) -> Result<DefectReport> {
    check_scales(scales)?;
    let v = v.to_spectral();
    let values = scales
        .iter()
        .map(|&e| {
            let r = vorticity_transport_residual_with(&v, e, kind)?;
            Ok(TermValue {
                integral: vec![r],
                value: r,
                magnitude: r,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DefectReport::build(
        TermId::VorticityTransport,
        scales,
        values,
        expected,
        Vec::new(),
    )
}
