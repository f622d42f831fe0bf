use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on the torus `[0, 2π)^dim` with the same number of
/// points on every axis.
///
/// Samples are stored row-major: axis 0 is the slowest index, the last axis
/// is contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    dim: usize,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct GridSpec {
    dim: usize,
    points_per_axis: usize,
}

impl TryFrom<GridSpec> for Grid {
    type Error = Error;
    fn try_from(s: GridSpec) -> Result<Self> {
        Grid::new(s.dim, s.points_per_axis)
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        GridSpec {
            dim: g.dim,
            points_per_axis: g.n,
        }
    }
}

impl Grid {
    pub const PERIOD: f64 = 2.0 * PI;

    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {points_per_axis}"
            )));
        }
        Ok(Grid {
            dim,
            n: points_per_axis,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        Self::PERIOD / self.n as f64
    }

    #[inline]
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Volume of the torus, `(2π)^dim`.
    #[inline]
    pub fn volume(&self) -> f64 {
        Self::PERIOD.powi(self.dim as i32)
    }

    /// Largest representable wavenumber magnitude along an axis.
    #[inline]
    pub fn nyquist(&self) -> usize {
        self.n / 2
    }

    /// Signed wavenumber of a 1D index; the Nyquist index maps to `-n/2`.
    #[inline]
    pub fn wavenumber(&self, index: usize) -> i64 {
        signed_mode(index, self.n)
    }

    /// Per-axis indices of a flat index (unused trailing axes are zero).
    #[inline]
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let n = self.n;
        match self.dim {
            2 => [flat / n, flat % n, 0],
            _ => [flat / (n * n), (flat / n) % n, flat % n],
        }
    }

    #[inline]
    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        let n = self.n;
        match self.dim {
            2 => idx[0] * n + idx[1],
            _ => (idx[0] * n + idx[1]) * n + idx[2],
        }
    }

    /// Wavevector of a flat spectral index.
    #[inline]
    pub fn wavevector(&self, flat: usize) -> [i64; 3] {
        let m = self.multi_index(flat);
        let mut k = [0i64; 3];
        for a in 0..self.dim {
            k[a] = signed_mode(m[a], self.n);
        }
        k
    }

    /// Wavevector with Nyquist components replaced by zero. This is the
    /// symbol used by every odd Fourier multiplier (derivatives, curl, Riesz)
    /// so that discrete gradients, curls and divergences compose exactly.
    #[inline]
    pub fn derivative_wavevector(&self, flat: usize) -> [f64; 3] {
        let k = self.wavevector(flat);
        let half = (self.n / 2) as i64;
        let mut out = [0.0; 3];
        for a in 0..self.dim {
            out[a] = if k[a].abs() == half { 0.0 } else { k[a] as f64 };
        }
        out
    }

    #[inline]
    pub fn wavenumber_sq(&self, flat: usize) -> i64 {
        let k = self.wavevector(flat);
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    /// Physical coordinates of a flat index.
    #[inline]
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let m = self.multi_index(flat);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = m[a] as f64 * h;
        }
        x
    }

    /// Minimal-image displacement from the origin of a flat index, in `[-π, π)`.
    #[inline]
    pub fn centered_coords(&self, flat: usize) -> [f64; 3] {
        let m = self.multi_index(flat);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = signed_mode(m[a], self.n) as f64 * h;
        }
        x
    }
}

#[inline]
pub(crate) fn signed_mode(index: usize, n: usize) -> i64 {
    if index < n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}
