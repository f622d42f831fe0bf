use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use helicon::fields::FieldFile;
use helicon::solver::{
    euler3d_integrate, sqg2d_integrate, ConservationRecord, SolverConfig, System,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::{emit, ensure_writable, load_field, num, write_field, Ctx};

pub const SCHEMA: &str = "helicon.solver-run.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemArg {
    Euler3d,
    Sqg2d,
}

/// RK4 integration with a conservation log.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SolverArgs {
    #[arg(long, value_enum)]
    pub system: Option<SystemArg>,
    /// FLD1 initial state: 3D velocity (euler3d) or 2D temperature (sqg2d).
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time, a whole number of steps.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Steps between log entries [default: 1].
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Save every logged state as FLD1 next to the output.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub snapshots: Option<bool>,
    /// Output file [default: solver.json or solver.csv].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Largest `|q − q(0)|`, and that over `|q(0)|` when `q(0)` is not roundoff.
fn drift(
    log: &[ConservationRecord],
    q: impl Fn(&ConservationRecord) -> Option<f64>,
) -> serde_json::Value {
    let Some(q0) = log.first().and_then(&q) else {
        return serde_json::Value::Null;
    };
    let abs = log
        .iter()
        .filter_map(&q)
        .map(|x| (x - q0).abs())
        .fold(0.0, f64::max);
    let rel = (q0.abs() > 1e-12).then(|| abs / q0.abs());
    json!({ "initial": q0, "absolute": abs, "relative": rel })
}

fn snapshot_path(out: &Path, step: usize) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "solver".into());
    out.with_file_name(format!("{stem}.step{step:06}.fld"))
}

pub fn run(args: SolverArgs, ctx: &Ctx) -> CliResult<()> {
    let system = match args.system {
        Some(SystemArg::Euler3d) => System::Euler3d,
        Some(SystemArg::Sqg2d) => System::Sqg2d,
        None => {
            return Err(CliError::validation(
                "run-solver needs --system euler3d|sqg2d",
            ))
        }
    };
    let path = args
        .field
        .clone()
        .ok_or_else(|| CliError::validation("run-solver needs --field <FILE>"))?;
    let dt = args
        .dt
        .ok_or_else(|| CliError::validation("run-solver needs --dt <VALUE>"))?;
    let t_end = args
        .t_end
        .ok_or_else(|| CliError::validation("run-solver needs --t-end <VALUE>"))?;
    let out = ctx.output_path(args.output.as_deref(), &ctx.default_name("solver"));
    ensure_writable(&out)?;
    let file = load_field(&path)?;
    let cfg = SolverConfig::new(file.grid, dt, t_end, args.record_every.unwrap_or(1), system)?;
    ctx.info(format!("run-solver: {} steps of {:?}", cfg.steps(), system));
    let (log, cfl, states): (Vec<ConservationRecord>, f64, Vec<FieldFile>) = match system {
        System::Euler3d => {
            let v = file.into_vector().map_err(|e| CliError::at(&path, e))?;
            let run = euler3d_integrate(&v, &cfg)?;
            let states = run
                .series
                .snapshots()
                .iter()
                .map(FieldFile::vector)
                .collect();
            (run.log, run.cfl, states)
        }
        System::Sqg2d => {
            let theta = file.into_scalar().map_err(|e| CliError::at(&path, e))?;
            let run = sqg2d_integrate(&theta, &cfg)?;
            let states = run
                .series
                .snapshots()
                .iter()
                .map(FieldFile::scalar)
                .collect();
            (run.log, run.cfl, states)
        }
    };
    let mut snapshot_files = Vec::new();
    if args.snapshots.unwrap_or(false) {
        for (rec, state) in log.iter().zip(&states) {
            let p = snapshot_path(&out, rec.step);
            write_field(&p, state)?;
            snapshot_files.push(p.display().to_string());
        }
    }
    let drifts = match system {
        System::Euler3d => json!({
            "energy": drift(&log, |r| Some(r.energy)),
            "helicity": drift(&log, |r| r.helicity),
        }),
        System::Sqg2d => json!({
            "energy": drift(&log, |r| Some(r.energy)),
            "l2": drift(&log, |r| r.l2),
            "hamiltonian": drift(&log, |r| r.hamiltonian),
        }),
    };
    let json = json!({
        "schema": SCHEMA,
        "system": args.system,
        "field": path.display().to_string(),
        "config": {
            "dim": cfg.grid.dim(),
            "n": cfg.grid.points_per_axis(),
            "dt": cfg.dt,
            "t_end": cfg.t_end,
            "record_every": cfg.record_every,
            "steps": cfg.steps(),
        },
        "cfl": cfl,
        "times": log.iter().map(|r| r.t).collect::<Vec<_>>(),
        "snapshots": snapshot_files,
        "log": log,
        "drift": drifts,
    });
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = log
        .iter()
        .map(|r| {
            let th = r.theta_helicity.map(|t| [num(t[0]), num(t[1])]);
            let [th1, th2] = th.unwrap_or_default();
            vec![
                r.step.to_string(),
                num(r.t),
                num(r.energy),
                opt(r.helicity),
                opt(r.max_divergence),
                opt(r.l2),
                opt(r.hamiltonian),
                th1,
                th2,
            ]
        })
        .collect();
    let header = [
        "step",
        "t",
        "energy",
        "helicity",
        "max_divergence",
        "l2",
        "hamiltonian",
        "theta_helicity_1",
        "theta_helicity_2",
    ];
    emit(ctx, &out, &json, &header, &rows)
}
