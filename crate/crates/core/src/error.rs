use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::QuadError;
use crate::specfun::SpecError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Special(#[from] SpecError),
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("{context}: integral did not converge (error estimate {error_estimate:e})")]
    NotConverged { context: String, error_estimate: f64 },
    #[error("equation is not solvable: |1 + transform of theta| = {min_abs:e} at tau = {argmin_tau}")]
    Unsolvable { min_abs: f64, argmin_tau: Complex64 },
    #[error("linear system is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
