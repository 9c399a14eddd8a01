use num_complex::Complex64;

use super::hyperu::kummer_psi;
use super::{check_positive, SpecError, SpecValue};

/// Whittaker function `W_{alpha,nu}(x) = e^{-x/2} x^{1/2+nu} Psi(1/2+nu-alpha, 1+2nu; x)`.
///
/// `nu` is first mapped to the half plane `Re nu > 0` (or the upper imaginary
/// axis), so `W_{alpha,nu} = W_{alpha,-nu}` holds bit for bit.
pub fn whittaker_w(alpha: Complex64, nu: Complex64, x: f64) -> Result<SpecValue, SpecError> {
    check_positive(x)?;
    let nu = if nu.re < 0.0 || (nu.re == 0.0 && nu.im < 0.0) { -nu } else { nu };
    let psi = kummer_psi(0.5 + nu - alpha, 1.0 + 2.0 * nu, x)?;
    let factor = (-0.5 * x + (0.5 + nu) * x.ln()).exp();
    let mut w = psi.scale(factor);
    // real alpha with real or purely imaginary nu gives a real function
    if alpha.im == 0.0 && (nu.re == 0.0 || nu.im == 0.0) {
        w.value.im = 0.0;
    }
    Ok(w)
}

/// Leading term of `W_{alpha, i tau}(x)` as `tau -> inf` for real `alpha`,
/// together with its amplitude `(2x)^{1/2} tau^{alpha-1/2} e^{-pi tau/2}`.
pub fn whittaker_w_large_tau(alpha: f64, tau: f64, x: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let amp = (2.0 * x).sqrt() * tau.powf(alpha - 0.5) * (-PI * tau / 2.0).exp();
    let phase = tau * (x / (4.0 * tau)).ln() + PI / 2.0 * (0.5 - alpha) + tau;
    (amp * phase.cos(), amp)
}
