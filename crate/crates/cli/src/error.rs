use std::fmt;
use std::path::Path;

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, input files or unwritable output.
    Validation(String),
    /// Non-finite state during a computation.
    Abort(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Abort(_) => 3,
        }
    }

    /// Error about a file, naming the path.
    pub fn at(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Validation(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Abort(m) => write!(f, "numerical abort: {m}"),
        }
    }
}

impl From<helicon::Error> for CliError {
    fn from(e: helicon::Error) -> Self {
        match e {
            helicon::Error::NumericalAbort { .. } => CliError::Abort(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}
