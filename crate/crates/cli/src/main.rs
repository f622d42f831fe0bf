//! `helicon`: field synthesis, regularity and defect scans, solver runs and
//! hypothesis reports from the command line.
//!
//! Exit codes: 0 on success, 2 on a validation error, 3 on a numerical abort.

mod cmd;
mod common;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use cmd::besov::BesovArgs;
use cmd::commutator::CommutatorArgs;
use cmd::defect::DefectArgs;
use cmd::helicity::HelicityArgs;
use cmd::report::ReportArgs;
use cmd::solver::SolverArgs;
use cmd::synth::SynthArgs;
use config::Config;
use error::{CliError, CliResult};
use output::{Ctx, Format};

#[derive(Debug, Parser)]
#[command(
    name = "helicon",
    version,
    about = "Spectral diagnostics for helicity conservation"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Default, clap::Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct GlobalArgs {
    /// TOML run config; sections mirror the flags, flags win.
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Global seed, split per module by tag [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format of scan results [default: json].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Directory for relative output paths [default: .].
    #[arg(long, global = true, env = "HELICON_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Worker threads for scan points [default: 1].
    #[arg(long, global = true, env = "HELICON_WORKERS")]
    workers: Option<usize>,
    /// Progress messages on stderr; repeat for more.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    #[serde(default, skip_serializing_if = "is_zero")]
    verbose: u8,
}

fn is_zero(v: &u8) -> bool {
    *v == 0
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a field and save it as FLD1.
    Synth(SynthArgs),
    /// Dyadic profile and finite-difference modulus of a field.
    AnalyzeBesov(BesovArgs),
    /// Commutator norm over a scale grid.
    CommutatorScan(CommutatorArgs),
    /// Defect terms of euler, ceuler or sqg over a scale grid.
    DefectScan(DefectArgs),
    /// Energy and helicity of a field.
    Helicity(HelicityArgs),
    /// Integrate euler3d or sqg2d with a conservation log.
    RunSolver(SolverArgs),
    /// Merge JSON outputs and check every theorem clause.
    Report(ReportArgs),
}

fn context(global: &GlobalArgs, config: &Config) -> CliResult<Ctx> {
    let g: GlobalArgs = config.merge("global", global)?;
    let workers = g.workers.unwrap_or(1);
    if workers == 0 {
        return Err(CliError::validation("--workers must be at least 1"));
    }
    Ok(Ctx {
        seed: g.seed.unwrap_or(0),
        format: g.format.unwrap_or(Format::Json),
        out_dir: g.out_dir.unwrap_or_else(|| PathBuf::from(".")),
        workers,
        verbose: g.verbose,
    })
}

fn run(cli: Cli) -> CliResult<()> {
    let config = match &cli.global.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let ctx = context(&cli.global, &config)?;
    match cli.command {
        Command::Synth(a) => cmd::synth::run(config.merge("synth", &a)?, &ctx),
        Command::AnalyzeBesov(a) => cmd::besov::run(config.merge("analyze-besov", &a)?, &ctx),
        Command::CommutatorScan(a) => {
            cmd::commutator::run(config.merge("commutator-scan", &a)?, &ctx)
        }
        Command::DefectScan(a) => cmd::defect::run(config.merge("defect-scan", &a)?, &ctx),
        Command::Helicity(a) => cmd::helicity::run(config.merge("helicity", &a)?, &ctx),
        Command::RunSolver(a) => cmd::solver::run(config.merge("run-solver", &a)?, &ctx),
        Command::Report(a) => cmd::report::run(config.merge("report", &a)?, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
