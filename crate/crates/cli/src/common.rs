use clap::ValueEnum;
use helicon::mollify::{resolvable_range, KernelKind, MAX_EPS};
use helicon::scan::geometric_scales;
use helicon::Grid;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelArg {
    Lattice,
    Continuum,
}

impl From<KernelArg> for KernelKind {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Lattice => KernelKind::Lattice,
            KernelArg::Continuum => KernelKind::Continuum,
        }
    }
}

/// Fewest scales a fitted scan accepts.
pub const MIN_SCALES: usize = 4;

/// Geometric ε grid, checked against the kernel's resolvable range.
pub fn scale_grid(
    grid: Grid,
    eps0: f64,
    ratio: f64,
    count: usize,
    kind: KernelKind,
) -> CliResult<Vec<f64>> {
    if !(eps0 > 0.0 && eps0 < MAX_EPS) {
        return Err(CliError::validation(format!(
            "--eps0 must lie in (0, {MAX_EPS:.6}), got {eps0}"
        )));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(CliError::validation(format!(
            "--ratio must lie in (0, 1), got {ratio}"
        )));
    }
    if count < MIN_SCALES {
        return Err(CliError::validation(format!(
            "--count must be at least {MIN_SCALES}, got {count}"
        )));
    }
    let scales = geometric_scales(eps0, ratio, count);
    let (lo, _) = resolvable_range(grid, kind);
    let smallest = scales[count - 1];
    if smallest < lo {
        return Err(CliError::validation(format!(
            "smallest scale {smallest:.6} is below the lattice kernel limit {lo:.6} on this grid; \
             raise --eps0 or --ratio, lower --count, or use --kernel continuum"
        )));
    }
    Ok(scales)
}

pub fn parse_grid(dim: usize, n: usize) -> CliResult<Grid> {
    Grid::new(dim, n).map_err(|e| CliError::validation(format!("--dim {dim} --n {n}: {e}")))
}

/// `{eps0, ratio, count, kernel}` block recorded in scan outputs.
pub fn scale_json(eps0: f64, ratio: f64, count: usize, kernel: KernelArg) -> serde_json::Value {
    serde_json::json!({ "eps0": eps0, "ratio": ratio, "count": count, "kernel": kernel })
}
