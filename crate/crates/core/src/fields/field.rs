use num_complex::Complex64;
use std::borrow::Cow;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Physical,
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
enum FieldData {
    Physical(Vec<f64>),
    Spectral(Vec<Complex64>),
}

/// Real scalar field sampled on a periodic grid, held either as point values
/// or as Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    data: FieldData,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        ScalarField {
            grid,
            data: FieldData::Physical(vec![c; grid.len()]),
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        ScalarField {
            grid,
            data: FieldData::Physical(values),
        }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::arg(format!("non-finite sample at index {i}")));
        }
        Ok(ScalarField {
            grid,
            data: FieldData::Physical(values),
        })
    }

    /// Builds a field from Fourier coefficients. The coefficients are
    /// symmetrized, `c(ξ) ← (c(ξ) + conj c(−ξ))/2`, so the field is real.
    pub fn from_coefficients(grid: Grid, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        hermitize(&grid, &mut coeffs);
        Ok(ScalarField {
            grid,
            data: FieldData::Spectral(coeffs),
        })
    }

    /// Wraps coefficients that are Hermitian by construction.
    pub(crate) fn spectral_unchecked(grid: Grid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        ScalarField {
            grid,
            data: FieldData::Spectral(coeffs),
        }
    }

    pub(crate) fn physical_unchecked(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ScalarField {
            grid,
            data: FieldData::Physical(values),
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn representation(&self) -> Representation {
        match self.data {
            FieldData::Physical(_) => Representation::Physical,
            FieldData::Spectral(_) => Representation::Spectral,
        }
    }

    pub fn transform(&self, target: Representation) -> ScalarField {
        match target {
            Representation::Physical => self.to_physical(),
            Representation::Spectral => self.to_spectral(),
        }
    }

    pub fn to_physical(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            data: FieldData::Physical(self.values().into_owned()),
        }
    }

    pub fn to_spectral(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            data: FieldData::Spectral(self.coefficients().into_owned()),
        }
    }

    /// Point values, transforming if needed.
    pub fn values(&self) -> Cow<'_, [f64]> {
        match &self.data {
            FieldData::Physical(v) => Cow::Borrowed(v),
            FieldData::Spectral(c) => Cow::Owned(fft::inverse_real(c, &self.grid_dims()).0),
        }
    }

    /// Fourier coefficients, transforming if needed.
    pub fn coefficients(&self) -> Cow<'_, [Complex64]> {
        match &self.data {
            FieldData::Spectral(c) => Cow::Borrowed(c),
            FieldData::Physical(v) => Cow::Owned(fft::forward_real(v, &self.grid_dims())),
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        let dims = self.grid_dims();
        match self.data {
            FieldData::Physical(v) => v,
            FieldData::Spectral(c) => fft::inverse_real(&c, &dims).0,
        }
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        let dims = self.grid_dims();
        match self.data {
            FieldData::Spectral(c) => c,
            FieldData::Physical(v) => fft::forward_real(&v, &dims),
        }
    }

    /// Largest imaginary part left over by an inverse transform.
    pub fn imaginary_residue(&self) -> f64 {
        match &self.data {
            FieldData::Physical(_) => 0.0,
            FieldData::Spectral(c) => fft::inverse_real(c, &self.grid_dims()).1,
        }
    }

    fn grid_dims(&self) -> Vec<usize> {
        vec![self.grid.points_per_axis(); self.grid.dim()]
    }

    /// Spatial average.
    pub fn mean(&self) -> f64 {
        match &self.data {
            FieldData::Spectral(c) => c[0].re,
            FieldData::Physical(v) => v.iter().sum::<f64>() / v.len() as f64,
        }
    }

    /// Integral over the torus.
    pub fn integral(&self) -> f64 {
        self.mean() * self.grid.volume()
    }

    pub fn min(&self) -> f64 {
        self.values().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        let values = self.values().iter().map(|&v| f(v)).collect();
        ScalarField::physical_unchecked(self.grid, values)
    }

    pub fn scale(&self, c: f64) -> ScalarField {
        match &self.data {
            FieldData::Physical(v) => {
                ScalarField::physical_unchecked(self.grid, v.iter().map(|x| c * x).collect())
            }
            FieldData::Spectral(s) => {
                ScalarField::spectral_unchecked(self.grid, s.iter().map(|x| c * x).collect())
            }
        }
    }

    /// `a·self + b·other`, kept in the representation of `self`.
    pub fn axpby(&self, a: f64, other: &ScalarField, b: f64) -> Result<ScalarField> {
        self.check_grid(other)?;
        Ok(match &self.data {
            FieldData::Physical(v) => {
                let w = other.values();
                let out = v.iter().zip(w.iter()).map(|(x, y)| a * x + b * y).collect();
                ScalarField::physical_unchecked(self.grid, out)
            }
            FieldData::Spectral(c) => {
                let d = other.coefficients();
                let out = c.iter().zip(d.iter()).map(|(x, y)| a * x + b * y).collect();
                ScalarField::spectral_unchecked(self.grid, out)
            }
        })
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.axpby(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.axpby(1.0, other, -1.0)
    }

    /// Pointwise product of grid samples (no dealiasing).
    pub fn mul_pointwise(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn zip_with(
        &self,
        other: &ScalarField,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<ScalarField> {
        self.check_grid(other)?;
        let a = self.values();
        let b = other.values();
        let out = a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect();
        Ok(ScalarField::physical_unchecked(self.grid, out))
    }

    pub(crate) fn check_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{}^{} vs {}^{}",
                self.grid.points_per_axis(),
                self.grid.dim(),
                other.grid.points_per_axis(),
                other.grid.dim()
            )));
        }
        Ok(())
    }
}

/// Enforces `c(−ξ) = conj c(ξ)` by averaging each conjugate pair.
pub(crate) fn hermitize(grid: &Grid, coeffs: &mut [Complex64]) {
    let n = grid.points_per_axis();
    for flat in 0..coeffs.len() {
        let m = grid.multi_index(flat);
        let mut neg = [0usize; 3];
        for a in 0..grid.dim() {
            neg[a] = (n - m[a]) % n;
        }
        let partner = grid.flat_index(neg);
        if partner < flat {
            continue;
        }
        let avg = 0.5 * (coeffs[flat] + coeffs[partner].conj());
        coeffs[flat] = avg;
        coeffs[partner] = avg.conj();
    }
}

/// Vector field with one scalar component per spatial dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    /// Components must share a grid and have as many entries as its dimension.
    /// They are brought to the representation of the first component.
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::arg("vector field needs at least one component"))?;
        let grid = first.grid();
        if components.len() != grid.dim() {
            return Err(Error::arg(format!(
                "{} components for a {}-dimensional grid",
                components.len(),
                grid.dim()
            )));
        }
        for c in &components[1..] {
            first.check_grid(c)?;
        }
        let rep = first.representation();
        let components = components
            .into_iter()
            .map(|c| {
                if c.representation() == rep {
                    c
                } else {
                    c.transform(rep)
                }
            })
            .collect();
        Ok(VectorField { components })
    }

    pub fn zeros(grid: Grid) -> Self {
        VectorField {
            components: vec![ScalarField::zeros(grid); grid.dim()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let d = grid.dim();
        let mut comps = vec![Vec::with_capacity(grid.len()); d];
        for i in 0..grid.len() {
            let v = f(grid.coords(i));
            for a in 0..d {
                comps[a].push(v[a]);
            }
        }
        VectorField {
            components: comps
                .into_iter()
                .map(|c| ScalarField::physical_unchecked(grid, c))
                .collect(),
        }
    }

    pub(crate) fn from_components_unchecked(components: Vec<ScalarField>) -> Self {
        VectorField { components }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.components[0].grid()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    #[inline]
    pub fn component(&self, i: usize) -> &ScalarField {
        &self.components[i]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    pub fn representation(&self) -> Representation {
        self.components[0].representation()
    }

    pub fn transform(&self, target: Representation) -> VectorField {
        self.map(|c| c.transform(target))
    }

    pub fn to_physical(&self) -> VectorField {
        self.transform(Representation::Physical)
    }

    pub fn to_spectral(&self) -> VectorField {
        self.transform(Representation::Spectral)
    }

    pub fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> VectorField {
        VectorField {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> VectorField {
        self.map(|f| f.scale(c))
    }

    pub fn axpby(&self, a: f64, other: &VectorField, b: f64) -> Result<VectorField> {
        self.check_shape(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(x, y)| x.axpby(a, y, b))
            .collect::<Result<_>>()?;
        Ok(VectorField { components })
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.axpby(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.axpby(1.0, other, -1.0)
    }

    /// Pointwise Euclidean dot product of grid samples.
    pub fn dot_pointwise(&self, other: &VectorField) -> Result<ScalarField> {
        self.check_shape(other)?;
        let grid = self.grid();
        let mut acc = vec![0.0; grid.len()];
        for (x, y) in self.components.iter().zip(&other.components) {
            let (x, y) = (x.values(), y.values());
            for i in 0..acc.len() {
                acc[i] += x[i] * y[i];
            }
        }
        Ok(ScalarField::physical_unchecked(grid, acc))
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        let grid = self.grid();
        let mut acc = vec![0.0; grid.len()];
        for c in &self.components {
            for (a, v) in acc.iter_mut().zip(c.values().iter()) {
                *a += v * v;
            }
        }
        ScalarField::physical_unchecked(grid, acc.into_iter().map(f64::sqrt).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.magnitude().max()
    }

    pub(crate) fn check_shape(&self, other: &VectorField) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::arg(format!(
                "vector fields of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        self.components[0].check_grid(&other.components[0])
    }
}

/// Scalar or vector field viewed as a list of scalar components.
pub trait FieldLike: Clone {
    fn grid(&self) -> Grid;
    fn scalar_components(&self) -> Vec<&ScalarField>;
    fn from_scalar_components(components: Vec<ScalarField>) -> Self;
}

impl FieldLike for ScalarField {
    fn grid(&self) -> Grid {
        self.grid
    }
    fn scalar_components(&self) -> Vec<&ScalarField> {
        vec![self]
    }
    fn from_scalar_components(mut components: Vec<ScalarField>) -> Self {
        components.swap_remove(0)
    }
}

impl FieldLike for VectorField {
    fn grid(&self) -> Grid {
        VectorField::grid(self)
    }
    fn scalar_components(&self) -> Vec<&ScalarField> {
        self.components.iter().collect()
    }
    fn from_scalar_components(components: Vec<ScalarField>) -> Self {
        VectorField { components }
    }
}

/// Snapshots of a field at strictly increasing times on one grid.
#[derive(Debug, Clone)]
pub struct TimeSeries<T> {
    times: Vec<f64>,
    snapshots: Vec<T>,
}

impl<T: FieldLike> TimeSeries<T> {
    pub fn new(times: Vec<f64>, snapshots: Vec<T>) -> Result<Self> {
        if times.len() != snapshots.len() {
            return Err(Error::arg(format!(
                "{} times for {} snapshots",
                times.len(),
                snapshots.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::arg("times must be strictly increasing"));
        }
        if let Some(first) = snapshots.first() {
            if snapshots.iter().any(|s| s.grid() != first.grid()) {
                return Err(Error::GridMismatch("snapshots on different grids".into()));
            }
        }
        Ok(TimeSeries { times, snapshots })
    }

    pub fn empty() -> Self {
        TimeSeries {
            times: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, snapshot: T) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::arg(format!("time {t} does not follow {last}")));
            }
            if snapshot.grid() != self.snapshots[0].grid() {
                return Err(Error::GridMismatch("snapshot on a different grid".into()));
            }
        }
        self.times.push(t);
        self.snapshots.push(snapshot);
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn snapshots(&self) -> &[T] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &T)> {
        self.times.iter().copied().zip(self.snapshots.iter())
    }
}
