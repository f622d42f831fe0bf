//! Periodic grids, sampled fields and spectral operators on the torus.

mod fft;
mod field;
mod grid;
mod io;
mod ops;

pub use fft::{fft_nd, Direction};
pub use field::{FieldLike, Representation, ScalarField, TimeSeries, VectorField};
pub use grid::Grid;
pub use io::{FieldFile, MAGIC};
pub use ops::{
    apply_multiplier, apply_real_multiplier, curl, curl2, curl3, dealiased_product, derivative,
    divergence, gradient, inner, leray_project, lp_norm, max_abs_oversampled, refine, restrict,
    shift, Curl,
};

pub use fft::{forward_real, inverse_real};
pub(crate) use ops::lp_of_samples;
