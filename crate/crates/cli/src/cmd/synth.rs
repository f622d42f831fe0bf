use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use helicon::conservation::PressureLaw;
use helicon::fields::FieldFile;
use helicon::seed;
use helicon::synth::{
    abc_flow, manufactured_compressible, random_besov_field, random_besov_vector_field,
    taylor_green, BesovFieldSpec, BesovVariant, CnDecay, DensityProfile, VelocityProfile,
};
use serde::{Deserialize, Serialize};

use crate::common::parse_grid;
use crate::error::{CliError, CliResult};
use crate::output::{ensure_writable, write_field, Ctx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthKind {
    Besov,
    Abc,
    TaylorGreen,
    Manufactured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityArg {
    SineProduct,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VelocityArg {
    Abc,
    RandomSolenoidal,
    Zero,
}

/// Generate a field and save it as FLD1.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SynthArgs {
    /// Field family [default: besov].
    #[arg(long, value_enum)]
    pub kind: Option<SynthKind>,
    /// Random Besov parameters as KEY=VALUE: alpha, p (3), variant
    /// (infinity|cN), seed, decay (reciprocal or a power exponent), shells
    /// (LO:HI).
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub besov: Option<Vec<String>>,
    /// Random Besov parameters from a TOML or JSON file.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    /// Dimension [default: 2 for besov, 3 otherwise].
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis [default: 64].
    #[arg(long)]
    pub n: Option<usize>,
    /// Besov vector field with one independent component per axis.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub vector: Option<bool>,
    /// Leray-project the Besov vector field.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub solenoidal: Option<bool>,
    /// ABC coefficients [default: 1 1 1].
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"])]
    pub abc: Option<Vec<f64>>,
    /// Manufactured density amplitude [default: 0.3].
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Adiabatic exponent of the manufactured pressure law [default: 5/3].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Manufactured density profile [default: sine-product].
    #[arg(long, value_enum)]
    pub density: Option<DensityArg>,
    /// Manufactured velocity [default: abc].
    #[arg(long, value_enum)]
    pub velocity: Option<VelocityArg>,
    /// Output file [default: field.fld].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_besov_pairs(pairs: &[String], default_seed: u64) -> CliResult<BesovFieldSpec> {
    let mut map = BTreeMap::new();
    for pair in pairs {
        let (k, v) = pair.split_once('=').ok_or_else(|| {
            CliError::validation(format!("--besov expects KEY=VALUE, got `{pair}`"))
        })?;
        if map
            .insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(CliError::validation(format!("--besov repeats key `{k}`")));
        }
    }
    let bad =
        |k: &str, v: &str| CliError::validation(format!("--besov {k}={v}: not a valid value"));
    let float = |k: &str| -> CliResult<Option<f64>> {
        map.get(k)
            .map(|v| v.parse::<f64>().map_err(|_| bad(k, v)))
            .transpose()
    };
    let alpha =
        float("alpha")?.ok_or_else(|| CliError::validation("--besov needs alpha=<value>"))?;
    let p = float("p")?.unwrap_or(3.0);
    let variant = match map.get("variant").map(String::as_str) {
        None | Some("infinity") | Some("inf") => BesovVariant::InfinityType,
        Some("cN") | Some("cn") => BesovVariant::CnType,
        Some(v) => return Err(bad("variant", v)),
    };
    let seed_value = match map.get("seed") {
        Some(v) => v.parse::<u64>().map_err(|_| bad("seed", v))?,
        None => default_seed,
    };
    let mut spec = BesovFieldSpec::new(alpha, p, variant, seed_value);
    if let Some(v) = map.get("decay") {
        spec.cn_decay = match v.as_str() {
            "reciprocal" => CnDecay::Reciprocal,
            e => CnDecay::Power {
                exponent: e.parse().map_err(|_| bad("decay", v))?,
            },
        };
    }
    if let Some(v) = map.get("shells") {
        let (lo, hi) = v.split_once(':').ok_or_else(|| bad("shells", v))?;
        spec.shells = Some((
            lo.parse().map_err(|_| bad("shells", v))?,
            hi.parse().map_err(|_| bad("shells", v))?,
        ));
    }
    const KEYS: [&str; 6] = ["alpha", "p", "variant", "seed", "decay", "shells"];
    if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(CliError::validation(format!(
            "--besov: unknown key `{k}`; expected one of {}",
            KEYS.join(", ")
        )));
    }
    Ok(spec)
}

fn load_spec(path: &std::path::Path) -> CliResult<BesovFieldSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::at(path, e))?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| CliError::at(path, e))
    } else {
        toml::from_str(&text).map_err(|e| CliError::at(path, e))
    }
}

pub fn run(args: SynthArgs, ctx: &Ctx) -> CliResult<()> {
    let kind = args.kind.unwrap_or(SynthKind::Besov);
    if kind != SynthKind::Besov && (args.besov.is_some() || args.spec.is_some()) {
        return Err(CliError::validation(
            "--besov and --spec apply only to --kind besov",
        ));
    }
    let dim = args
        .dim
        .unwrap_or(if kind == SynthKind::Besov { 2 } else { 3 });
    let grid = parse_grid(dim, args.n.unwrap_or(64))?;
    let out = ctx.output_path(args.output.as_deref(), "field.fld");
    ensure_writable(&out)?;
    let [a, b, c] = match args.abc.as_deref() {
        None => [1.0, 1.0, 1.0],
        Some(&[a, b, c]) => [a, b, c],
        Some(v) => {
            return Err(CliError::validation(format!(
                "--abc takes three coefficients, got {}",
                v.len()
            )))
        }
    };
    let file = match kind {
        SynthKind::Besov => {
            let spec = match (&args.besov, &args.spec) {
                (Some(_), Some(_)) => {
                    return Err(CliError::validation(
                        "give either --besov or --spec, not both",
                    ))
                }
                (Some(pairs), None) => parse_besov_pairs(pairs, seed::derive(ctx.seed, "synth"))?,
                (None, Some(path)) => load_spec(path)?,
                (None, None) => {
                    return Err(CliError::validation(
                        "--kind besov needs --besov alpha=<value> ... or --spec <file>",
                    ))
                }
            };
            ctx.info(format!(
                "synth: random Besov field {spec:?} on {dim}d n={}",
                grid.points_per_axis()
            ));
            if args.vector.unwrap_or(false) || args.solenoidal.unwrap_or(false) {
                let solenoidal = args.solenoidal.unwrap_or(false);
                FieldFile::vector(&random_besov_vector_field(grid, &spec, solenoidal)?)
            } else {
                FieldFile::scalar(&random_besov_field(grid, &spec)?)
            }
        }
        SynthKind::Abc => FieldFile::vector(&abc_flow(grid, a, b, c)?),
        SynthKind::TaylorGreen => FieldFile::vector(&taylor_green(grid)?),
        SynthKind::Manufactured => {
            let law = PressureLaw::isentropic(args.gamma.unwrap_or(5.0 / 3.0))?;
            let density = match args.density.unwrap_or(DensityArg::SineProduct) {
                DensityArg::SineProduct => DensityProfile::SineProduct,
                DensityArg::Random => DensityProfile::Random,
            };
            let velocity = match args.velocity.unwrap_or(VelocityArg::Abc) {
                VelocityArg::Abc => VelocityProfile::Abc { a, b, c },
                VelocityArg::RandomSolenoidal => VelocityProfile::RandomSolenoidal,
                VelocityArg::Zero => VelocityProfile::Zero,
            };
            let state = manufactured_compressible(
                grid,
                args.amplitude.unwrap_or(0.3),
                law,
                density,
                velocity,
                seed::derive(ctx.seed, "synth"),
            )?;
            let mut components = vec![state.rho];
            components.extend(state.v.into_components());
            FieldFile { grid, components }
        }
    };
    write_field(&out, &file)?;
    ctx.info(format!("synth: wrote {}", out.display()));
    Ok(())
}
