pub mod besov;
pub mod commutator;
pub mod defect;
pub mod helicity;
pub mod report;
pub mod solver;
pub mod synth;
