use num_complex::Complex64;

use super::hyperu::kummer_psi;
use super::{check_positive, SpecError, SpecValue};

/// `e^{z^2/4} D_mu(z)`, free of the Gaussian factor that underflows for large `z`.
///
/// For `Re mu < 1` this is the Laplace representation
/// `2^{(mu-1)/2} z Psi((1-mu)/2, 3/2; z^2/2)`; otherwise the equivalent
/// `2^{mu/2} Psi(-mu/2, 1/2; z^2/2)`, whose evaluation recurs in the stable
/// direction for every `z`.
pub fn parabolic_d_scaled(mu: Complex64, z: f64) -> Result<SpecValue, SpecError> {
    check_positive(z)?;
    let ln2 = std::f64::consts::LN_2;
    let x = 0.5 * z * z;
    if mu.re < 1.0 {
        let psi = kummer_psi((1.0 - mu) * 0.5, Complex64::new(1.5, 0.0), x)?;
        Ok(psi.scale(((mu - 1.0) * 0.5 * ln2).exp() * z))
    } else {
        let psi = kummer_psi(-mu * 0.5, Complex64::new(0.5, 0.0), x)?;
        Ok(psi.scale((mu * 0.5 * ln2).exp()))
    }
}

/// Parabolic cylinder function `D_mu(z)` for `z > 0`.
pub fn parabolic_d(mu: Complex64, z: f64) -> Result<SpecValue, SpecError> {
    let s = parabolic_d_scaled(mu, z)?;
    Ok(s.scale(Complex64::new((-0.25 * z * z).exp(), 0.0)))
}
