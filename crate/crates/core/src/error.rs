use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dyadic block {j} out of range [{j_min}, {j_max}]")]
    BlockRange { j: i32, j_min: i32, j_max: i32 },

    #[error("mollifier scale {eps} is not resolvable on this grid (allowed: {min_eps:.6} <= eps < {max_eps:.6})")]
    Resolvability {
        eps: f64,
        min_eps: f64,
        max_eps: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("density must be positive (min rho = {min_rho})")]
    Domain { min_rho: f64 },

    #[error("non-finite state at step {step} (last finite time t = {last_finite_time})")]
    NumericalAbort { step: usize, last_finite_time: f64 },

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
