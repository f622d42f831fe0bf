use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_power_law, fit_window, LineFit, Trend};

/// Measured quantity over a decreasing list of scales, with a power-law fit
/// over the central window and, when an exponent is expected, the trend of
/// `value / scale^expected` toward small scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleScan {
    pub scales: Vec<f64>,
    pub values: Vec<f64>,
    pub compensated: Vec<f64>,
    pub expected_exponent: Option<f64>,
    /// Half-open index range `[start, end)` used for the fit.
    pub window: (usize, usize),
    pub fit: Option<LineFit>,
    pub trend: Option<Trend>,
}

impl ScaleScan {
    /// Pairs are sorted by decreasing scale; scales must be positive and
    /// distinct, values non-negative.
    pub fn new(scales: &[f64], values: &[f64], expected_exponent: Option<f64>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::arg("scale list is empty"));
        }
        if scales.len() != values.len() {
            return Err(Error::arg(format!(
                "{} scales for {} values",
                scales.len(),
                values.len()
            )));
        }
        if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::arg("scales must be positive and finite"));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::arg("scan values must be non-negative"));
        }
        let mut pairs: Vec<(f64, f64)> =
            scales.iter().copied().zip(values.iter().copied()).collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::arg("scales must be distinct"));
        }
        let scales: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let values: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let compensated = scales
            .iter()
            .zip(&values)
            .map(|(s, v)| match expected_exponent {
                Some(e) => v / s.powf(e),
                None => *v,
            })
            .collect();
        let window = fit_window(scales.len());
        let fit = if window.1 - window.0 >= 2 {
            fit_power_law(&scales[window.0..window.1], &values[window.0..window.1])
        } else {
            None
        };
        let trend = match (fit, expected_exponent) {
            (Some(f), Some(e)) => Some(Trend::from_decay_rate(f.slope - e)),
            _ => None,
        };
        Ok(ScaleScan {
            scales,
            values,
            compensated,
            expected_exponent,
            window,
            fit,
            trend,
        })
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.map(|f| f.slope)
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    /// `(scale, value, compensated)` rows in scan order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.scales
            .iter()
            .zip(&self.values)
            .zip(&self.compensated)
            .map(|((s, v), c)| (*s, *v, *c))
    }

    /// Ratio of the largest to smallest scale.
    pub fn span(&self) -> f64 {
        self.scales[0] / self.scales[self.scales.len() - 1]
    }
}

/// `count` scales `eps0, eps0·ratio, eps0·ratio², …`.
pub fn geometric_scales(eps0: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| eps0 * ratio.powi(i as i32)).collect()
}
