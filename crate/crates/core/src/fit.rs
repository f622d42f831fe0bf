//! Log-log regression and the trend classification shared by every scan.

use serde::{Deserialize, Serialize};

/// Half-width of the band in which a fitted trend counts as flat.
pub const DEAD_BAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`. Needs two distinct `x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n || x.iter().chain(y).any(|v| !v.is_finite()) {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Some(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Slope of `ln y` against `ln x`; undefined if any value is not positive.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Option<LineFit> {
    if x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

/// Index range kept after dropping the largest and smallest 20% of points.
pub fn fit_window(n: usize) -> (usize, usize) {
    let drop = (n as f64 * 0.2).floor() as usize;
    if n - 2 * drop < 2 {
        return (0, n);
    }
    (drop, n - drop)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// Compensated quantity shrinks toward the small-scale end.
    Decaying,
    Flat,
    Growing,
}

impl Trend {
    /// Classifies a log-slope where positive means decay toward small scales.
    pub fn from_decay_rate(rate: f64) -> Trend {
        if rate > DEAD_BAND {
            Trend::Decaying
        } else if rate < -DEAD_BAND {
            Trend::Growing
        } else {
            Trend::Flat
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Decaying => "decaying",
            Trend::Flat => "flat",
            Trend::Growing => "growing",
        }
    }
}

impl std::fmt::Display for Trend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
