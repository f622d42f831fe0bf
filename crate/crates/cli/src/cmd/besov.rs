use std::path::PathBuf;

use clap::{Args, ValueEnum};
use helicon::conservation::{BesovMeasurement, Summability};
use helicon::fields::{curl, gradient, Curl};
use helicon::fit::Trend;
use helicon::littlewood_paley::{cn_profile, default_difference_scales, finite_difference_modulus};
use helicon::{ScalarField, VectorField};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::{emit, ensure_writable, load_field, log10, num, Ctx};

pub const SCHEMA: &str = "helicon.besov-analysis.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    None,
    Curl,
    Gradient,
}

/// Quantity a measurement stands for in the regularity summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Velocity,
    Vorticity,
    Density,
    Momentum,
    GradTheta,
}

impl Role {
    /// Matching key of the regularity summary.
    pub fn summary_key(&self) -> &'static str {
        match self {
            Role::Velocity => "velocity_besov",
            Role::Vorticity => "vorticity_besov",
            Role::Density => "density_besov",
            Role::Momentum => "momentum_besov",
            Role::GradTheta => "grad_theta_besov",
        }
    }
}

/// Dyadic profile and finite-difference modulus of every component.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BesovArgs {
    /// FLD1 input.
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Smoothness exponent to test.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Integrability exponent [default: 3].
    #[arg(long)]
    pub p: Option<f64>,
    /// Operator applied before analysis [default: none].
    #[arg(long, value_enum)]
    pub transform: Option<Transform>,
    /// Record the result as a measurement of this quantity.
    #[arg(long, value_enum)]
    pub role: Option<Role>,
    /// Time integrability attached to the measurement [default: inf].
    #[arg(long)]
    pub time_integrability: Option<f64>,
    /// Output file [default: besov.json or besov.csv].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn components(field: Vec<ScalarField>, transform: Transform) -> CliResult<Vec<ScalarField>> {
    match transform {
        Transform::None => Ok(field),
        Transform::Gradient => {
            if field.len() != 1 {
                return Err(CliError::validation(format!(
                    "--transform gradient needs a scalar field, file has {} components",
                    field.len()
                )));
            }
            Ok(gradient(&field[0]).into_components())
        }
        Transform::Curl => {
            let v = VectorField::new(field).map_err(|e| {
                CliError::validation(format!("--transform curl needs a vector field: {e}"))
            })?;
            Ok(match curl(&v)? {
                Curl::Vector(w) => w.into_components(),
                Curl::Scalar(w) => vec![w],
            })
        }
    }
}

/// Summability from the trends: `c(ℕ)` when every component decays, `∞`
/// when none grows. A growing component lowers the exponent to the smallest
/// estimated one.
fn measurement(
    alpha: f64,
    p: f64,
    time: f64,
    trends: &[(Option<Trend>, Option<f64>)],
) -> (Option<BesovMeasurement>, Vec<String>) {
    let mut notes = Vec::new();
    if trends.iter().any(|(t, _)| t.is_none()) {
        notes.push("too few nonzero dyadic blocks for a trend; no measurement".into());
        return (None, notes);
    }
    let all = |want: Trend| trends.iter().all(|(t, _)| *t == Some(want));
    let growing = trends.iter().any(|(t, _)| *t == Some(Trend::Growing));
    let (exponent, summability) = if all(Trend::Decaying) {
        (alpha, Summability::CN)
    } else if !growing {
        (alpha, Summability::Infinity)
    } else {
        let est = trends
            .iter()
            .filter_map(|(_, e)| *e)
            .fold(f64::INFINITY, f64::min);
        if !est.is_finite() {
            notes.push("compensated profile grows and no exponent could be estimated".into());
            return (None, notes);
        }
        notes.push(format!(
            "compensated profile grows at alpha = {alpha}; recorded the estimated exponent {est:.4}"
        ));
        (est, Summability::Infinity)
    };
    (
        Some(BesovMeasurement {
            exponent,
            integrability: p,
            time_integrability: time,
            summability,
        }),
        notes,
    )
}

pub fn run(args: BesovArgs, ctx: &Ctx) -> CliResult<()> {
    let path = args
        .field
        .ok_or_else(|| CliError::validation("analyze-besov needs --field <FILE>"))?;
    let alpha = args
        .alpha
        .ok_or_else(|| CliError::validation("analyze-besov needs --alpha <VALUE>"))?;
    if !alpha.is_finite() {
        return Err(CliError::validation(format!(
            "--alpha must be finite, got {alpha}"
        )));
    }
    let p = args.p.unwrap_or(3.0);
    if p.is_nan() || p < 1.0 {
        return Err(CliError::validation(format!("--p must be >= 1, got {p}")));
    }
    let time = args.time_integrability.unwrap_or(f64::INFINITY);
    if time.is_nan() || time < 1.0 {
        return Err(CliError::validation(format!(
            "--time-integrability must be >= 1, got {time}"
        )));
    }
    let transform = args.transform.unwrap_or(Transform::None);
    let out = ctx.output_path(args.output.as_deref(), &ctx.default_name("besov"));
    ensure_writable(&out)?;
    let file = load_field(&path)?;
    let grid = file.grid;
    let comps = components(file.components, transform)?;
    let scales = default_difference_scales(grid);
    let results = ctx.par_map(&comps, |f| {
        Ok((
            cn_profile(f, alpha, p)?,
            finite_difference_modulus(f, alpha, p, &scales)?,
        ))
    })?;

    let trends: Vec<_> = results
        .iter()
        .map(|(prof, _)| (prof.trend(), prof.estimated_exponent))
        .collect();
    let (meas, notes) = match args.role {
        Some(_) => measurement(alpha, p, time, &trends),
        None => (None, Vec::new()),
    };
    let json = json!({
        "schema": SCHEMA,
        "field": path.display().to_string(),
        "dim": grid.dim(),
        "n": grid.points_per_axis(),
        "transform": transform,
        "alpha": alpha,
        "p": p,
        "components": results.iter().enumerate().map(|(k, (prof, modulus))| json!({
            "component": k,
            "profile": prof,
            "modulus": modulus,
        })).collect::<Vec<_>>(),
        "role": args.role,
        "measurement": meas,
        "notes": notes,
    });
    let mut rows = Vec::new();
    for (k, (prof, modulus)) in results.iter().enumerate() {
        for e in &prof.entries {
            let scale = (-(e.j as f64)).exp2();
            rows.push(vec![
                "profile".into(),
                k.to_string(),
                e.j.to_string(),
                num(scale),
                num(e.block_norm),
                num(e.compensated),
                log10(scale),
                log10(e.block_norm),
            ]);
        }
        for (i, (s, v, c)) in modulus.rows().enumerate() {
            rows.push(vec![
                "modulus".into(),
                k.to_string(),
                i.to_string(),
                num(s),
                num(v),
                num(c),
                log10(s),
                log10(v),
            ]);
        }
    }
    let header = [
        "table",
        "component",
        "index",
        "scale",
        "value",
        "compensated",
        "log10_scale",
        "log10_value",
    ];
    emit(ctx, &out, &json, &header, &rows)
}
