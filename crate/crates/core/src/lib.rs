pub mod convolve;
pub mod error;
pub mod grid;
pub mod inteq;
pub mod kernels;
pub mod quadrature;
pub mod specfun;
pub mod transform;

pub use error::{Error, Result};
