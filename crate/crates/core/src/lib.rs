//! Spectral diagnostics for helicity and energy conservation on the periodic
//! torus: Littlewood–Paley blocks and Besov profiles, mollifier rates,
//! commutator scaling, defect fluxes, synthetic fields and small
//! pseudo-spectral solvers.

pub mod commutator;
pub mod conservation;
pub mod error;
pub mod fields;
pub mod fit;
pub mod littlewood_paley;
pub mod mollify;
pub mod quadrature;
pub mod scan;
pub mod seed;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
pub use fields::{Grid, ScalarField, VectorField};
pub use scan::ScaleScan;
