use std::path::PathBuf;

use clap::{Args, ValueEnum};
use helicon::conservation::{
    compressible_defects_with, density_bounds_note, helicity_flux_term, sqg_defect_terms_with,
    DefectReport, PressureLaw, TermId, TermValue,
};
use helicon::fields::FieldFile;
use helicon::mollify::KernelKind;
use helicon::{ScalarField, VectorField};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::common::{scale_grid, scale_json, KernelArg};
use crate::error::{CliError, CliResult};
use crate::output::{emit, ensure_writable, load_field, log10, num, Ctx};

pub const SCHEMA: &str = "helicon.defect-scan.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemArg {
    /// Helicity flux of a 3D velocity.
    Euler,
    /// Compressible terms I1 to I4 of a density and velocity.
    Ceuler,
    /// SQG terms I to III of a 2D temperature.
    Sqg,
}

/// Defect terms over a geometric ε grid.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DefectArgs {
    #[arg(long, value_enum)]
    pub system: Option<SystemArg>,
    /// FLD1 input: velocity (euler), density followed by velocity or
    /// velocity alone with --density (ceuler), temperature (sqg).
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Separate scalar density file for ceuler.
    #[arg(long)]
    pub density: Option<PathBuf>,
    /// Adiabatic exponent [default: 5/3].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Pressure coefficient [default: (gamma-1)^2/(4 gamma)].
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Declared density bounds c1 c2.
    #[arg(long, num_args = 2, value_names = ["C1", "C2"])]
    pub bounds: Option<Vec<f64>>,
    /// Derivative axis of the SQG terms [default: both].
    #[arg(long)]
    pub axis: Option<usize>,
    /// Expected power of ε [default: 0].
    #[arg(long)]
    pub expected: Option<f64>,
    /// Largest ε [default: 0.7].
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Ratio between successive ε [default: 0.8].
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Number of scales [default: 12].
    #[arg(long)]
    pub count: Option<usize>,
    /// Mollifier kernel [default: continuum].
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// Output file [default: defects.json or defects.csv].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Reports over `scales` from per-scale term lists in a fixed order.
fn reports(
    ids: &[TermId],
    scales: &[f64],
    per_scale: Vec<Vec<TermValue>>,
    expected: Option<f64>,
    notes: &[String],
) -> CliResult<Vec<DefectReport>> {
    ids.iter()
        .enumerate()
        .map(|(k, &id)| {
            let values = per_scale.iter().map(|t| t[k].clone()).collect();
            Ok(DefectReport::build(
                id,
                scales,
                values,
                expected,
                notes.to_vec(),
            )?)
        })
        .collect()
}

fn split_ceuler(args: &DefectArgs, file: FieldFile) -> CliResult<(ScalarField, VectorField)> {
    let d = file.grid.dim();
    match &args.density {
        Some(dp) => {
            let rho = load_field(dp)?
                .into_scalar()
                .map_err(|e| CliError::at(dp, e))?;
            if rho.grid() != file.grid {
                return Err(CliError::at(
                    dp,
                    "density and velocity are on different grids",
                ));
            }
            let v = file
                .into_vector()
                .map_err(|e| CliError::validation(format!("--field: {e}")))?;
            Ok((rho, v))
        }
        None => {
            if file.components.len() != d + 1 {
                return Err(CliError::validation(format!(
                    "ceuler needs a {}-component --field (density, then velocity) or --density; \
                     the file has {} components",
                    d + 1,
                    file.components.len()
                )));
            }
            let mut comps = file.components;
            let rho = comps.remove(0);
            Ok((rho, VectorField::new(comps)?))
        }
    }
}

pub fn run(args: DefectArgs, ctx: &Ctx) -> CliResult<()> {
    let system = args
        .system
        .ok_or_else(|| CliError::validation("defect-scan needs --system euler|ceuler|sqg"))?;
    let path = args
        .field
        .clone()
        .ok_or_else(|| CliError::validation("defect-scan needs --field <FILE>"))?;
    if system != SystemArg::Ceuler
        && (args.density.is_some()
            || args.gamma.is_some()
            || args.kappa.is_some()
            || args.bounds.is_some())
    {
        return Err(CliError::validation(
            "--density, --gamma, --kappa and --bounds apply only to --system ceuler",
        ));
    }
    if system != SystemArg::Sqg && args.axis.is_some() {
        return Err(CliError::validation("--axis applies only to --system sqg"));
    }
    let bounds = match args.bounds.as_deref() {
        None => None,
        Some(&[c1, c2]) if 0.0 < c1 && c1 <= c2 => Some((c1, c2)),
        Some(b) => {
            return Err(CliError::validation(format!(
                "--bounds needs 0 < c1 <= c2, got {b:?}"
            )))
        }
    };
    let (eps0, ratio, count) = (
        args.eps0.unwrap_or(0.7),
        args.ratio.unwrap_or(0.8),
        args.count.unwrap_or(12),
    );
    let kernel = args.kernel.unwrap_or(KernelArg::Continuum);
    let kind: KernelKind = kernel.into();
    let out = ctx.output_path(args.output.as_deref(), &ctx.default_name("defects"));
    ensure_writable(&out)?;
    let file = load_field(&path)?;
    let scales = scale_grid(file.grid, eps0, ratio, count, kind)?;
    let mut extra = json!({});
    let mut tagged: Vec<(Option<usize>, DefectReport)> = Vec::new();
    match system {
        SystemArg::Euler => {
            let v = file
                .into_vector()
                .map_err(|e| CliError::at(&path, e))?
                .to_spectral();
            let per = ctx.par_map(&scales, |&e| Ok(vec![helicity_flux_term(&v, e, kind)?]))?;
            for r in reports(&[TermId::HelicityFlux], &scales, per, args.expected, &[])? {
                tagged.push((None, r));
            }
        }
        SystemArg::Ceuler => {
            let law = match (args.gamma, args.kappa) {
                (g, Some(k)) => PressureLaw::new(k, g.unwrap_or(5.0 / 3.0))?,
                (g, None) => PressureLaw::isentropic(g.unwrap_or(5.0 / 3.0))?,
            };
            let (rho, v) = split_ceuler(&args, file)?;
            if rho.min() <= 0.0 {
                return Err(CliError::validation(format!(
                    "density must be positive, minimum is {}",
                    rho.min()
                )));
            }
            let notes = density_bounds_note(&rho, bounds);
            let per = ctx.par_map(&scales, |&e| {
                let d = compressible_defects_with(&rho, &v, &law, e, None, kind)?;
                Ok(d.terms().iter().map(|(_, t)| (*t).clone()).collect())
            })?;
            let ids = [TermId::I1, TermId::I2, TermId::I3, TermId::I4];
            for r in reports(&ids, &scales, per, args.expected, &notes)? {
                tagged.push((None, r));
            }
            extra = json!({ "law": law, "bounds": bounds, "density": args.density.as_ref().map(|p| p.display().to_string()) });
        }
        SystemArg::Sqg => {
            let theta = file
                .into_scalar()
                .map_err(|e| CliError::at(&path, e))?
                .to_spectral();
            if theta.grid().dim() != 2 {
                return Err(CliError::at(
                    &path,
                    "sqg needs a two-dimensional temperature",
                ));
            }
            let axes: Vec<usize> = match args.axis {
                Some(a) if a < 2 => vec![a],
                Some(a) => {
                    return Err(CliError::validation(format!(
                        "--axis must be 0 or 1, got {a}"
                    )))
                }
                None => vec![0, 1],
            };
            let mean = theta.mean();
            let notes = if mean.abs() > helicon::conservation::MEAN_TOLERANCE {
                vec![format!("mean {mean:e} removed before evaluation")]
            } else {
                Vec::new()
            };
            let ids = [TermId::SqgI, TermId::SqgII, TermId::SqgIII];
            for axis in axes {
                let per = ctx.par_map(&scales, |&e| {
                    let t = sqg_defect_terms_with(&theta, e, axis, kind)?;
                    Ok(t.terms().iter().map(|(_, v)| (*v).clone()).collect())
                })?;
                for r in reports(&ids, &scales, per, args.expected, &notes)? {
                    tagged.push((Some(axis), r));
                }
            }
        }
    }

    let report_json: Vec<Value> = tagged
        .iter()
        .map(|(axis, r)| {
            let mut j = r.to_json();
            j["axis"] = json!(axis);
            j
        })
        .collect();
    let json = json!({
        "schema": SCHEMA,
        "system": system,
        "field": path.display().to_string(),
        "scales": scale_json(eps0, ratio, count, kernel),
        "inputs": extra,
        "reports": report_json,
    });
    let mut rows = Vec::new();
    for (axis, r) in &tagged {
        for ((s, v, c), integral) in r.scan.rows().zip(&r.integrals) {
            let signed = integral.iter().map(|x| x * x).sum::<f64>().sqrt();
            rows.push(vec![
                r.term_id.as_str().to_string(),
                axis.map(|a| a.to_string()).unwrap_or_default(),
                num(s),
                num(v),
                num(c),
                log10(s),
                log10(v),
                num(signed),
            ]);
        }
    }
    let header = [
        "term_id",
        "axis",
        "epsilon",
        "value",
        "compensated",
        "log10_epsilon",
        "log10_value",
        "integral_norm",
    ];
    emit(ctx, &out, &json, &header, &rows)
}
