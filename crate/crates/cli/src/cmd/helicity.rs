use std::path::PathBuf;

use clap::Args;
use helicon::conservation::{energy, helicity, sqg_helicity};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::{emit, ensure_writable, load_field, num, Ctx};

pub const SCHEMA: &str = "helicon.helicity.v1";

/// Energy and helicity of a 3D velocity, or `∫θ∂_iθ` of a 2D scalar.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct HelicityArgs {
    /// FLD1 input.
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Output file [default: helicity.json or helicity.csv].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: HelicityArgs, ctx: &Ctx) -> CliResult<()> {
    let path = args
        .field
        .ok_or_else(|| CliError::validation("helicity needs --field <FILE>"))?;
    let out = ctx.output_path(args.output.as_deref(), &ctx.default_name("helicity"));
    ensure_writable(&out)?;
    let file = load_field(&path)?;
    let grid = file.grid;
    let mut quantities: Vec<(&str, f64)> = Vec::new();
    match (grid.dim(), file.components.len()) {
        (3, 3) => {
            let v = file.into_vector().map_err(|e| CliError::at(&path, e))?;
            quantities.push(("energy", energy(&v)?));
            quantities.push(("helicity", helicity(&v)?));
        }
        (2, 1) => {
            let theta = file.into_scalar().map_err(|e| CliError::at(&path, e))?;
            quantities.push(("sqg_helicity_1", sqg_helicity(&theta, 0)?));
            quantities.push(("sqg_helicity_2", sqg_helicity(&theta, 1)?));
        }
        (d, c) => {
            return Err(CliError::at(
                &path,
                format!(
                    "expected a 3-component 3D velocity or a 2D scalar, got {c} components in dimension {d}"
                ),
            ))
        }
    }
    let values: serde_json::Map<String, serde_json::Value> = quantities
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let json = json!({
        "schema": SCHEMA,
        "field": path.display().to_string(),
        "dim": grid.dim(),
        "n": grid.points_per_axis(),
        "values": values,
    });
    let rows: Vec<Vec<String>> = quantities
        .iter()
        .map(|(k, v)| vec![k.to_string(), num(*v)])
        .collect();
    emit(ctx, &out, &json, &["quantity", "value"], &rows)
}
