//! Confluent hypergeometric function of the second kind, `Psi(a, b; x) = U(a, b, x)`.
//!
//! For `Re a >= 1/2` the Laplace-type representation
//!
//! ```text
//! Gamma(a) Psi(a, b; x) = int_0^inf e^{-x t} t^{a-1} (1 + t)^{b-a-1} dt
//! ```
//!
//! is integrated along a ray `arg t = theta`. For large `Im a` the real-axis
//! integrand oscillates like `t^{i Im a}` while the value is of size
//! `exp(-pi |Im a| / 2)`; turning the ray towards `pi/2 sign(Im a)` removes
//! that cancellation. Other parameters are reduced to this case by Kummer's
//! transformation `Psi(a, b; x) = x^{1-b} Psi(a-b+1, 2-b; x)` or by the
//! three-term recurrence in `a`, run towards decreasing `a` where it is stable.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::{check_positive, in_envelope, SpecError, SpecValue};
use crate::quadrature::{integrate_halfline_scaled, QuadratureConfig};

const DIRECT_MIN_RE: f64 = 0.1;
/// Above this ratio of `int |f|` to `|int f|` other ray angles are tried.
const CANCELLATION_LIMIT: f64 = 1e3;

fn internal_cfg() -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: 1e-13,
        abs_tol: 1e-300,
        max_refinement_levels: 9,
        x_truncation_bound: 1e-18,
        tau_max: 1.0,
    }
}

struct RayIntegral {
    value: Complex64,
    error: f64,
    cancellation: f64,
    converged: bool,
}

/// Power-series part `int_0^{eps e^{i theta}} t^{a-1} g(t) dt` with
/// `g(t) = (1+t)^c e^{-xt}`; the coefficients of `g` obey
/// `(k+1) g_{k+1} = (c - x - k) g_k - x g_{k-1}`.
fn head_series(a: Complex64, c: Complex64, x: f64, eps: f64, theta: f64, shift_re: f64) -> (Complex64, f64) {
    let lead = (a * Complex64::new(eps.ln(), theta) - shift_re).exp();
    let step = Complex64::from_polar(eps, theta);
    let mut g_prev = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(1.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut small = 0;
    for k in 0..400 {
        let term = g * power / (a + k as f64);
        sum += term;
        abs_sum += term.norm();
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        let g_next = ((c - x - k as f64) * g - x * g_prev) / (k + 1) as f64;
        g_prev = g;
        g = g_next;
        power *= step;
    }
    (sum * lead, abs_sum * lead.norm())
}

/// `Psi(a, b; x)` for `Re a > 0` from the Laplace integral on the ray at
/// angle `theta`. The segment `|t| <= eps` is summed as a power series, which
/// absorbs both the `t^{a-1}` endpoint singularity and the unbounded
/// oscillation of `t^{i Im a}` near the origin.
fn laplace_on_ray(a: Complex64, b: Complex64, x: f64, theta: f64) -> Result<RayIntegral, SpecError> {
    let rot = Complex64::from_polar(1.0, theta);
    let am1 = a - 1.0;
    let c = b - a - 1.0;
    // e^{-Im(a) theta} is the natural size of the integrand; divide it out
    let shift_re = -theta * a.im;
    // keep the series terms from growing: |c| eps and x eps of order one
    let eps = 0.5f64.min(2.0 / x).min(2.0 / c.norm().max(1e-300));
    let (head, head_abs) = head_series(a, c, x, eps, theta, shift_re);
    // t^{b-2} e^{-xt} puts the mass near (b - 2)/x when b is large or x small
    let scale = (a.norm().max(1.0) / x.max(1.0)).max((b.re - 1.0).max(0.0) / x).max(eps);
    let f = |r: f64| {
        let rr = eps + r;
        let t = rot * rr;
        let lt = Complex64::new(rr.ln(), theta);
        let lf = -x * t + am1 * lt + c * (1.0 + t).ln() + Complex64::new(0.0, theta);
        (lf - shift_re).exp()
    };
    let est = integrate_halfline_scaled(f, scale, &internal_cfg())?;
    let lg = ln_gamma(a)?;
    let norm = (Complex64::new(shift_re, 0.0) - lg).exp();
    let total = est.value + head;
    let abs_total = est.abs_integral + head_abs;
    let mag = total.norm();
    Ok(RayIntegral {
        value: total * norm,
        error: (est.error_estimate + 4.0 * f64::EPSILON * abs_total) * norm.norm(),
        cancellation: if mag > 0.0 { abs_total / mag } else { f64::INFINITY },
        converged: est.converged,
    })
}

fn preferred_angle(a: Complex64) -> f64 {
    let p = a.im;
    if p.abs() <= 1.0 / FRAC_PI_2 {
        0.0
    } else {
        p.signum() * (FRAC_PI_2 - 1.0 / p.abs())
    }
}

fn direct(a: Complex64, b: Complex64, x: f64) -> Result<SpecValue, SpecError> {
    let theta0 = preferred_angle(a);
    let mut best = laplace_on_ray(a, b, x, theta0)?;
    if best.cancellation > CANCELLATION_LIMIT || !best.converged {
        let s = if theta0 == 0.0 { 1.0 } else { theta0.signum() };
        for theta in [0.0, s * 0.7, -s * 0.7, s * 1.2, -theta0] {
            if theta == theta0 {
                continue;
            }
            let alt = laplace_on_ray(a, b, x, theta)?;
            let better = (alt.converged && !best.converged)
                || (alt.converged == best.converged && alt.cancellation < best.cancellation);
            if better {
                best = alt;
            }
            if best.cancellation <= CANCELLATION_LIMIT && best.converged {
                break;
            }
        }
    }
    let rel = best.error / best.value.norm().max(f64::MIN_POSITIVE);
    Ok(SpecValue {
        value: best.value,
        error_estimate: best.error,
        accurate: rel <= 1e-10,
    })
}

/// Kummer's `M(a, b; x)` by its power series, with the sum of term moduli.
fn kummer_m(a: Complex64, b: Complex64, x: f64) -> (Complex64, f64) {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut small = 0;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * (x / (kf + 1.0));
        sum += term;
        let t = term.norm();
        abs_sum += t;
        if t <= 1e-17 * sum.norm() && kf > x {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (sum, abs_sum)
}

/// `ln(1/Gamma(z))`, or `None` at a pole of Gamma where the reciprocal vanishes.
fn ln_rgamma(z: Complex64) -> Result<Option<Complex64>, SpecError> {
    match ln_gamma(z) {
        Ok(v) => Ok(Some(-v)),
        Err(SpecError::Pole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Distance of `b` from the integers, below which the connection formula is
/// not used (its two terms both diverge there).
const INTEGER_B_GAP: f64 = 1e-9;

fn integer_gap(b: Complex64) -> f64 {
    (b - b.re.round()).norm()
}

/// Connection formula
/// `U = G(1-b)/G(a-b+1) M(a,b,x) + G(b-1)/G(a) x^{1-b} M(a-b+1,2-b,x)`.
fn connection(a: Complex64, b: Complex64, x: f64) -> Result<SpecValue, SpecError> {
    let lx = x.ln();
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_total = 0.0;
    if let Some(r) = ln_rgamma(a - b + 1.0)? {
        let (m, m_abs) = kummer_m(a, b, x);
        let coef = (ln_gamma(1.0 - b)? + r).exp();
        value += coef * m;
        abs_total += coef.norm() * m_abs;
    }
    if let Some(r) = ln_rgamma(a)? {
        let (m, m_abs) = kummer_m(a - b + 1.0, 2.0 - b, x);
        let coef = (ln_gamma(b - 1.0)? + r + (1.0 - b) * lx).exp();
        value += coef * m;
        abs_total += coef.norm() * m_abs;
    }
    let error = 8.0 * f64::EPSILON * abs_total;
    let rel = error / value.norm().max(f64::MIN_POSITIVE);
    Ok(SpecValue { value, error_estimate: error, accurate: rel <= 1e-10 })
}

fn pick(first: SpecValue, second: SpecValue) -> SpecValue {
    let r1 = first.error_estimate / first.value.norm().max(f64::MIN_POSITIVE);
    let r2 = second.error_estimate / second.value.norm().max(f64::MIN_POSITIVE);
    if r2 < r1 { second } else { first }
}

/// Accept the connection formula when it is clearly accurate, otherwise fall
/// back to the integral and keep whichever error estimate is smaller.
fn series_or_integral<F>(a: Complex64, b: Complex64, x: f64, integral: F) -> Result<SpecValue, SpecError>
where
    F: FnOnce() -> Result<SpecValue, SpecError>,
{
    if integer_gap(b) >= INTEGER_B_GAP && x <= 2.0 * b.im.abs() + 30.0 {
        let s = connection(a, b, x)?;
        if s.error_estimate <= 1e-13 * s.value.norm() {
            return Ok(s);
        }
        let i = integral()?;
        return Ok(pick(i, s));
    }
    integral()
}

fn kummer_reflected(a: Complex64, b: Complex64, x: f64) -> Result<SpecValue, SpecError> {
    let inner = direct(a - b + 1.0, 2.0 - b, x)?;
    Ok(inner.scale(((1.0 - b) * x.ln()).exp()))
}

/// Backward recurrence `U(c-1) = -(b - 2c - x) U(c) - c (c - b + 1) U(c+1)`
/// from `c = a + m` down to `c = a`.
///
/// Two unit perturbations of the starting pair are carried along, so the
/// error estimate includes whatever amplification the recurrence produces.
fn recurrence(a: Complex64, b: Complex64, x: f64) -> Result<SpecValue, SpecError> {
    let m = (DIRECT_MIN_RE - a.re).ceil().max(1.0) as usize;
    let top = direct(a + m as f64, b, x)?;
    let above = direct(a + (m + 1) as f64, b, x)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // (value, perturbation of top, perturbation of above), each as (U(c), U(c+1))
    let mut u = (top.value, above.value);
    let mut p = (one, zero);
    let mut q = (zero, one);
    let mut local = 0.0f64;
    for k in (1..=m).rev() {
        let c = a + k as f64;
        let f1 = -(b - 2.0 * c - x);
        let f2 = -c * (c - b + 1.0);
        let next = f1 * u.0 + f2 * u.1;
        if next.norm() > 0.0 {
            local = local.max(((f1 * u.0).norm() + (f2 * u.1).norm()) / next.norm());
        }
        u = (next, u.0);
        p = (f1 * p.0 + f2 * p.1, p.0);
        q = (f1 * q.0 + f2 * q.1, q.0);
    }
    let value = u.0;
    let start_err = top.error_estimate.max(f64::EPSILON * top.value.norm()) * p.0.norm()
        + above.error_estimate.max(f64::EPSILON * above.value.norm()) * q.0.norm();
    let error = start_err + m as f64 * f64::EPSILON * local * value.norm();
    Ok(SpecValue {
        value,
        error_estimate: error,
        accurate: error <= 1e-10 * value.norm(),
    })
}

fn psi_unchecked(a: Complex64, b: Complex64, x: f64) -> Result<SpecValue, SpecError> {
    if a == Complex64::new(0.0, 0.0) {
        return Ok(SpecValue::exact(Complex64::new(1.0, 0.0)));
    }
    series_or_integral(a, b, x, || {
        if a.re >= DIRECT_MIN_RE {
            direct(a, b, x)
        } else if (a - b + 1.0).re >= DIRECT_MIN_RE {
            kummer_reflected(a, b, x)
        } else {
            recurrence(a, b, x)
        }
    })
}

/// `Psi(a, b; x)` for complex `a`, `b` and `x > 0`.
///
/// The `accurate` flag is cleared outside `|a|, |b| <= 20`, `1e-3 <= x <= 50`
/// or when an internal integral did not reach its tolerance.
pub fn kummer_psi(a: Complex64, b: Complex64, x: f64) -> Result<SpecValue, SpecError> {
    check_positive(x)?;
    Ok(psi_unchecked(a, b, x)?.flag(in_envelope(&[a, b], x)))
}

/// The transform kernel `x^{a+i tau} Psi(a + i tau, 1 + 2 i tau; x)` for real
/// `a`, `tau`; it is real and even in `tau`.
pub fn kummer_psi_kernel(a: f64, tau: f64, x: f64) -> Result<SpecValue, SpecError> {
    check_positive(x)?;
    let tau = tau.abs();
    let nu = Complex64::new(a, tau);
    let b = Complex64::new(1.0, 2.0 * tau);
    let lx = x.ln();
    let via_integral = || -> Result<SpecValue, SpecError> {
        let psi = if a >= DIRECT_MIN_RE { direct(nu, b, x)? } else { recurrence(nu, b, x)? };
        Ok(psi.scale((nu * lx).exp()))
    };
    let v = if 2.0 * tau >= INTEGER_B_GAP && x <= 4.0 * tau + 30.0 {
        // the two connection terms are complex conjugates of each other once
        // multiplied by x^{a + i tau}, so one series suffices
        let (m, m_abs) = kummer_m(nu, b, x);
        let coef = (ln_gamma(Complex64::new(0.0, -2.0 * tau))? - ln_gamma(nu.conj())? + nu * lx).exp();
        let value = Complex64::new(2.0 * (coef * m).re, 0.0);
        let error = 16.0 * f64::EPSILON * coef.norm() * m_abs;
        // judge against the envelope, 2|coef M| for small x and at most 1:
        // near the zeros of the oscillation a relative test would reject an
        // accurate sum
        let envelope = (2.0 * (coef * m).norm()).min(1.0).max(value.norm());
        let s = SpecValue { value, error_estimate: error, accurate: error <= 1e-10 * envelope };
        if error <= 1e-13 * envelope { s } else { pick(via_integral()?, s) }
    } else {
        via_integral()?
    };
    Ok(SpecValue { value: Complex64::new(v.value.re, 0.0), ..v })
}
