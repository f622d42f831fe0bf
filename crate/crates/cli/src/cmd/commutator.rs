use std::path::PathBuf;

use clap::{Args, ValueEnum};
use helicon::commutator::cet_commutator_with;
use helicon::seed;
use helicon::synth::{random_besov_field, BesovFieldSpec, BesovVariant};
use helicon::{ScalarField, ScaleScan};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::common::{parse_grid, scale_grid, scale_json, KernelArg};
use crate::error::{CliError, CliResult};
use crate::output::{emit, ensure_writable, load_field, log10, num, Ctx};

pub const SCHEMA: &str = "helicon.commutator-scan.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Infinity,
    #[value(name = "cN", alias = "cn")]
    #[serde(rename = "cN", alias = "cn")]
    CN,
}

impl From<VariantArg> for BesovVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Infinity => BesovVariant::InfinityType,
            VariantArg::CN => BesovVariant::CnType,
        }
    }
}

/// `‖(fg)^ε − f^ε g^ε‖_{L^p}` over a geometric ε grid, for two scalar
/// files or a synthetic pair.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CommutatorArgs {
    /// First scalar FLD1 input.
    #[arg(long)]
    pub f: Option<PathBuf>,
    /// Second scalar FLD1 input.
    #[arg(long)]
    pub g: Option<PathBuf>,
    /// Smoothness of the synthetic f.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Smoothness of the synthetic g.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Summability type of the synthetic pair [default: infinity].
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Integrability of the synthetic pair [default: 3].
    #[arg(long)]
    pub besov_p: Option<f64>,
    /// Dimension of the synthetic pair [default: 2].
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis of the synthetic pair [default: 256].
    #[arg(long)]
    pub n: Option<usize>,
    /// Norm of the commutator [default: 1.5].
    #[arg(long)]
    pub p: Option<f64>,
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
    /// Expected power of ε [default: alpha + beta for a synthetic pair].
    #[arg(long)]
    pub expected: Option<f64>,
    /// Output file [default: commutator.json or commutator.csv].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

struct Pair {
    f: ScalarField,
    g: ScalarField,
    inputs: serde_json::Value,
    expected: Option<f64>,
}

fn load_scalar(path: &std::path::Path) -> CliResult<ScalarField> {
    load_field(path)?
        .into_scalar()
        .map_err(|e| CliError::at(path, e))
}

fn pair(args: &CommutatorArgs, ctx: &Ctx) -> CliResult<Pair> {
    let synthetic = args.alpha.is_some() || args.beta.is_some();
    match (&args.f, &args.g, synthetic) {
        (Some(fp), Some(gp), false) => {
            let f = load_scalar(fp)?;
            let g = load_scalar(gp)?;
            if f.grid() != g.grid() {
                return Err(CliError::validation(format!(
                    "{} and {} are on different grids",
                    fp.display(),
                    gp.display()
                )));
            }
            Ok(Pair {
                f,
                g,
                inputs: json!({ "kind": "files", "f": fp.display().to_string(), "g": gp.display().to_string() }),
                expected: args.expected,
            })
        }
        (None, None, true) => {
            let (alpha, beta) = match (args.alpha, args.beta) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(CliError::validation(
                        "a synthetic pair needs both --alpha and --beta",
                    ))
                }
            };
            let grid = parse_grid(args.dim.unwrap_or(2), args.n.unwrap_or(256))?;
            let variant = args.variant.unwrap_or(VariantArg::Infinity);
            let p = args.besov_p.unwrap_or(3.0);
            let sf = BesovFieldSpec::new(
                alpha,
                p,
                variant.into(),
                seed::derive(ctx.seed, "commutator-f"),
            );
            let sg = BesovFieldSpec::new(
                beta,
                p,
                variant.into(),
                seed::derive(ctx.seed, "commutator-g"),
            );
            ctx.info(format!("commutator-scan: synthesizing pair {sf:?} {sg:?}"));
            Ok(Pair {
                f: random_besov_field(grid, &sf)?,
                g: random_besov_field(grid, &sg)?,
                inputs: json!({ "kind": "synthetic", "f": sf, "g": sg, "dim": grid.dim(), "n": grid.points_per_axis() }),
                expected: args.expected.or(Some(alpha + beta)),
            })
        }
        (_, _, true) => Err(CliError::validation(
            "give either --f and --g or a synthetic --alpha/--beta pair, not both",
        )),
        _ => Err(CliError::validation(
            "commutator-scan needs --f <FILE> --g <FILE>, or --alpha <A> --beta <B>",
        )),
    }
}

pub fn run(args: CommutatorArgs, ctx: &Ctx) -> CliResult<()> {
    let p = args.p.unwrap_or(1.5);
    if p.is_nan() || p < 1.0 {
        return Err(CliError::validation(format!("--p must be >= 1, got {p}")));
    }
    let (eps0, ratio, count) = (
        args.eps0.unwrap_or(0.7),
        args.ratio.unwrap_or(0.8),
        args.count.unwrap_or(12),
    );
    let kernel = args.kernel.unwrap_or(KernelArg::Continuum);
    let out = ctx.output_path(args.output.as_deref(), &ctx.default_name("commutator"));
    ensure_writable(&out)?;
    let pair = pair(&args, ctx)?;
    let scales = scale_grid(pair.f.grid(), eps0, ratio, count, kernel.into())?;
    let f = pair.f.to_spectral();
    let g = pair.g.to_spectral();
    let values = ctx.par_map(&scales, |&eps| {
        cet_commutator_with(&f, &g, eps, kernel.into())?.norm(p)
    })?;
    let scan = ScaleScan::new(&scales, &values, pair.expected)?;
    let json = json!({
        "schema": SCHEMA,
        "inputs": pair.inputs,
        "p": p,
        "scales": scale_json(eps0, ratio, count, kernel),
        "scan": scan,
    });
    let rows: Vec<Vec<String>> = scan
        .rows()
        .map(|(s, v, c)| vec![num(s), num(v), num(c), log10(s), log10(v)])
        .collect();
    let header = [
        "epsilon",
        "value",
        "compensated",
        "log10_epsilon",
        "log10_value",
    ];
    emit(ctx, &out, &json, &header, &rows)
}
