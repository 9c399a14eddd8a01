//! Special functions with complex parameters and positive real argument.

mod bessel;
mod gamma;
mod hyperu;
mod parabolic;
mod whittaker;

pub use bessel::bessel_k;
pub use gamma::{gamma, ln_gamma, pochhammer};
pub use hyperu::{kummer_psi, kummer_psi_kernel};
pub use parabolic::{parabolic_d, parabolic_d_scaled};
pub use whittaker::{whittaker_w, whittaker_w_large_tau};

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::QuadError;

/// Parameter and argument region inside which the evaluators are designed to
/// meet their stated accuracy.
pub const PARAM_ENVELOPE: f64 = 20.0;
pub const X_ENVELOPE: (f64, f64) = (1e-3, 50.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("argument {z} is within 1e-12 of the Gamma pole at {nearest}")]
    Pole { z: Complex64, nearest: i64 },
    #[error("argument must be positive, got {0}")]
    Domain(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// A function value with its estimated absolute error and a flag telling
/// whether the evaluation point was inside the supported envelope and the
/// internal integrals converged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub accurate: bool,
}

impl SpecValue {
    pub(crate) fn exact(value: Complex64) -> Self {
        Self { value, error_estimate: 0.0, accurate: true }
    }

    pub(crate) fn scale(self, factor: Complex64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.norm(),
            accurate: self.accurate,
        }
    }

    pub(crate) fn flag(mut self, inside: bool) -> Self {
        self.accurate &= inside;
        self
    }
}

pub(crate) fn in_envelope(params: &[Complex64], x: f64) -> bool {
    params.iter().all(|p| p.norm() <= PARAM_ENVELOPE) && (X_ENVELOPE.0..=X_ENVELOPE.1).contains(&x)
}

pub(crate) fn check_positive(x: f64) -> Result<(), SpecError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(SpecError::Domain(x))
    }
}
