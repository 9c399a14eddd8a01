use std::fmt;
use std::path::Path;

use iwt_core::specfun::SpecError;
use iwt_core::Error;

/// Malformed input or arguments.
pub const EXIT_USAGE: i32 = 2;
/// A numerical method failed or refused the problem.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERICAL, message: message.into() }
    }

    pub fn json(path: &Path, e: &serde_json::Error) -> Self {
        Self::usage(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    }

    /// Attaches the file an error came from.
    pub fn in_file(self, path: &Path) -> Self {
        Self { message: format!("{}: {}", path.display(), self.message), ..self }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Io(_) | Error::Domain(_) => Self::usage(e.to_string()),
            Error::Quadrature(_) => Self::numerical(format!("quadrature: {e}")),
            Error::Special(SpecError::Quadrature(_)) => Self::numerical(format!("specfun: {e}")),
            Error::Special(_) => Self::usage(e.to_string()),
            Error::NotConverged { .. } => Self::numerical(e.to_string()),
            Error::Unsolvable { .. } | Error::IllConditioned(_) => Self::numerical(format!("inteq: {e}")),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        Error::from(e).into()
    }
}

impl From<iwt_core::quadrature::QuadError> for CliError {
    fn from(e: iwt_core::quadrature::QuadError) -> Self {
        Error::from(e).into()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl std::error::Error for CliError {}
