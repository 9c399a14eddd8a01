//! Product-formula kernels.
//!
//! With `S = xy + x xi + y xi` and `z = S / sqrt(2 x y xi)`,
//!
//! ```text
//! k_alpha(x,y,xi) = 2^{-1-alpha} pi^{-1/2} (x y xi)^{1/2} e^{(x+y+xi)/2 - z^2/4} D_{2 alpha}(z)
//! q_a(x,y,xi)     = 2^{a-3/2} pi^{-1/2} (x y xi)^a e^{x+y+xi - z^2/4} D_{1-2a}(z)
//! m_a(xi)         = xi^{-2a-1} e^{-xi}
//! ```
//!
//! Everything is assembled in log space around `Dt_mu(z) = e^{z^2/4} D_mu(z)`.
//! The exponent `x + y + xi - z^2/2` equals `w - (uw + vw - uv)^2 / (4uvw)` for
//! the sorted triple `u <= v <= w`, a form free of cancellation; sorting also
//! makes the kernels exactly symmetric.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_index, IntegralEstimate, QuadratureConfig};
use crate::specfun::{kummer_psi, parabolic_d_scaled};
use crate::transform::density_rho;

const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

fn check_triple(x: f64, y: f64, xi: f64) -> Result<()> {
    for (name, v) in [("x", x), ("y", y), ("xi", xi)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    Ok(())
}

/// Sorted triple, `z` and the exponent `x + y + xi - z^2/2`.
fn geometry(x: f64, y: f64, xi: f64) -> (f64, f64, f64) {
    let mut t = [x, y, xi];
    t.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let [u, v, w] = t;
    let p = u * v * w;
    let s = u * v + u * w + v * w;
    let z = s / (2.0 * p).sqrt();
    let d = u * w + v * w - u * v;
    let expo = w - d * d / (4.0 * p);
    (z, p.ln(), expo)
}

/// `m_a(xi) = xi^{-2a-1} e^{-xi}`.
pub fn weight_m(a: f64, xi: f64) -> f64 {
    ln_weight_m(a, xi).exp()
}

pub fn ln_weight_m(a: f64, xi: f64) -> f64 {
    (-2.0 * a - 1.0) * xi.ln() - xi
}

/// Product-formula kernel `k_alpha(x, y, xi)` for complex `alpha`.
pub fn kernel_k(alpha: Complex64, x: f64, y: f64, xi: f64) -> Result<Complex64> {
    check_triple(x, y, xi)?;
    let (z, ln_p, expo) = geometry(x, y, xi);
    // (x+y+xi)/2 - z^2/2 = expo/2 - z^2/4
    let ln = (-1.0 - alpha) * LN_2 - LN_SQRT_PI + 0.5 * ln_p + 0.5 * expo - 0.25 * z * z;
    if underflows(ln.re, 2.0 * alpha.norm(), z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let d = parabolic_d_scaled(2.0 * alpha, z)?.value;
    Ok(ln.exp() * d)
}

/// `Dt_mu(z)` grows at most like `(1+z)^{|mu|}`, so a log-prefactor below this
/// threshold gives an exact zero without evaluating `D`.
fn underflows(ln_prefactor: f64, mu_abs: f64, z: f64) -> bool {
    ln_prefactor + (mu_abs + 1.0) * (1.0 + z).ln() < -750.0
}

fn ln_q_parts(a: f64, x: f64, y: f64, xi: f64, d_scaled: f64) -> f64 {
    let (_, ln_p, expo) = geometry(x, y, xi);
    (a - 1.5) * LN_2 - LN_SQRT_PI + a * ln_p + expo + d_scaled.ln()
}

fn check_order(a: f64) -> Result<()> {
    if a >= 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("kernel order a must be >= 0, got {a}")))
    }
}

/// Confluent product-formula kernel `q_a(x, y, xi)`, `a >= 0`; strictly positive.
pub fn kernel_q(a: f64, x: f64, y: f64, xi: f64) -> Result<f64> {
    check_order(a)?;
    check_triple(x, y, xi)?;
    let (z, _, _) = geometry(x, y, xi);
    if underflows(ln_q_parts(a, x, y, xi, 1.0), (1.0 - 2.0 * a).abs(), z) {
        return Ok(0.0);
    }
    let d = parabolic_d_scaled(Complex64::new(1.0 - 2.0 * a, 0.0), z)?.value.re;
    Ok(ln_q_parts(a, x, y, xi, d).exp())
}

/// `q_a(x, y, xi) m_a(xi)`, evaluated without forming either factor.
pub fn kernel_q_weighted(a: f64, x: f64, y: f64, xi: f64) -> Result<f64> {
    check_order(a)?;
    check_triple(x, y, xi)?;
    let (z, ln_p, _) = geometry(x, y, xi);
    let ln = ln_q_weighted(a, x, y, xi, ln_p);
    if underflows(ln, (1.0 - 2.0 * a).abs(), z) {
        return Ok(0.0);
    }
    let d = parabolic_d_scaled(Complex64::new(1.0 - 2.0 * a, 0.0), z)?.value.re;
    Ok((ln + d.ln()).exp())
}

/// Log of `q_a m_a` without the `Dt` factor.
fn ln_q_weighted(a: f64, x: f64, y: f64, xi: f64, ln_p: f64) -> f64 {
    // x + y - z^2/2 = -(x xi + y xi - x y)^2 / (4 x y xi)
    let d = x * xi + y * xi - x * y;
    let expo = -d * d / (4.0 * x * y * xi);
    (a - 1.5) * LN_2 - LN_SQRT_PI + a * ln_p + expo + (-2.0 * a - 1.0) * xi.ln()
}

const CHEB_DEGREE: usize = 22;
const PANEL_WIDTH: f64 = 0.5;

/// `q_a` for one fixed order with `Dt_{1-2a}` tabulated: piecewise Chebyshev
/// on `[0, Z]`, asymptotic series beyond. Used by the convolution code, which
/// needs millions of kernel values of a single order.
#[derive(Debug, Clone)]
pub struct QKernel {
    a: f64,
    mu: f64,
    z_max: f64,
    panels: Vec<[f64; CHEB_DEGREE]>,
}

impl QKernel {
    pub fn new(a: f64) -> Result<Self> {
        check_order(a)?;
        let mu = 1.0 - 2.0 * a;
        let z_max = 12.0 + mu.abs();
        let n_panels = (z_max / PANEL_WIDTH).ceil() as usize;
        let z_max = n_panels as f64 * PANEL_WIDTH;
        let mut panels = Vec::with_capacity(n_panels);
        for j in 0..n_panels {
            let lo = j as f64 * PANEL_WIDTH;
            let mut vals = [0.0; CHEB_DEGREE];
            for (k, v) in vals.iter_mut().enumerate() {
                let t = (PI * (k as f64 + 0.5) / CHEB_DEGREE as f64).cos();
                let z = lo + 0.5 * PANEL_WIDTH * (t + 1.0);
                *v = parabolic_d_scaled(Complex64::new(mu, 0.0), z)?.value.re;
            }
            let mut coef = [0.0; CHEB_DEGREE];
            for (m, c) in coef.iter_mut().enumerate() {
                let mut s = 0.0;
                for (k, v) in vals.iter().enumerate() {
                    s += v * (PI * m as f64 * (k as f64 + 0.5) / CHEB_DEGREE as f64).cos();
                }
                *c = 2.0 * s / CHEB_DEGREE as f64;
            }
            coef[0] *= 0.5;
            panels.push(coef);
        }
        Ok(Self { a, mu, z_max, panels })
    }

    pub fn order(&self) -> f64 {
        self.a
    }

    /// `e^{z^2/4} D_{1-2a}(z)` for `z >= 0`.
    pub fn d_scaled(&self, z: f64) -> f64 {
        if z < self.z_max {
            let j = ((z / PANEL_WIDTH) as usize).min(self.panels.len() - 1);
            let lo = j as f64 * PANEL_WIDTH;
            let t = 2.0 * (z - lo) / PANEL_WIDTH - 1.0;
            let c = &self.panels[j];
            let (mut b1, mut b2) = (0.0, 0.0);
            for &ck in c.iter().skip(1).rev() {
                let b0 = 2.0 * t * b1 - b2 + ck;
                b2 = b1;
                b1 = b0;
            }
            t * b1 - b2 + c[0]
        } else {
            // D_mu(z) ~ z^mu e^{-z^2/4} sum_k (-1)^k (mu)(mu-1)...(mu-2k+1) / (k! (2 z^2)^k)
            let mu = self.mu;
            let inv = 1.0 / (2.0 * z * z);
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 0..60 {
                let kf = k as f64;
                term *= -(mu - 2.0 * kf) * (mu - 2.0 * kf - 1.0) / (kf + 1.0) * inv;
                sum += term;
                if term.abs() < 1e-17 * sum.abs() {
                    break;
                }
            }
            z.powf(mu) * sum
        }
    }

    pub fn q(&self, x: f64, y: f64, xi: f64) -> f64 {
        let (z, _, _) = geometry(x, y, xi);
        ln_q_parts(self.a, x, y, xi, self.d_scaled(z)).exp()
    }

    /// `q_a(x, y, xi) m_a(xi)`.
    pub fn q_weighted(&self, x: f64, y: f64, xi: f64) -> f64 {
        self.ln_q_weighted(x, y, xi).exp()
    }

    /// `ln(q_a(x, y, xi) m_a(xi))`, `-inf` once the value is far below the
    /// double range.
    pub fn ln_q_weighted(&self, x: f64, y: f64, xi: f64) -> f64 {
        let (z, ln_p, _) = geometry(x, y, xi);
        let ln = ln_q_weighted(self.a, x, y, xi, ln_p);
        if ln < -800.0 {
            return f64::NEG_INFINITY;
        }
        ln + self.d_scaled(z).ln()
    }
}

/// Envelope constant `A(y)` of the kernel bound, for order `a` (`mu = 1 - 2a`):
/// `2^{2a-2} pi^{-1/2} max_{t >= sqrt(y)} t^{-mu} Dt_mu(t)`.
pub fn envelope_constant(a: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain(format!("y must be positive, got {y}")));
    }
    let mu = 1.0 - 2.0 * a;
    let g = |t: f64| -> Result<f64> {
        let d = parabolic_d_scaled(Complex64::new(mu, 0.0), t)?.value.re;
        Ok(d.abs() * t.powf(-mu))
    };
    let t0 = y.sqrt();
    let n = 160;
    let step = 40.0 / n as f64;
    let mut best = (g(t0)?, t0);
    for k in 1..=n {
        let t = t0 + k as f64 * step;
        let v = g(t)?;
        if v > best.0 {
            best = (v, t);
        }
    }
    // golden-section refinement around the best sample
    let (mut lo, mut hi) = ((best.1 - step).max(t0), best.1 + step);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    for _ in 0..60 {
        if gc > gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - r * (hi - lo);
            gc = g(c)?;
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + r * (hi - lo);
            gd = g(d)?;
        }
    }
    // t^{-mu} Dt_mu(t) -> 1 as t -> inf, which bounds the tail beyond the window
    let m = best.0.max(gc).max(gd).max(1.0);
    Ok((2.0 * a - 2.0).exp2() * m / PI.sqrt())
}

/// Upper bound for `|q_a(x, y, xi)|`:
/// `A(y) (x y xi)^{2a-1/2} S^{1-2a} exp(xi - (x(xi-y) + y xi)^2 / (4 x y xi))`.
pub fn kernel_envelope(a: f64, x: f64, y: f64, xi: f64) -> Result<f64> {
    check_triple(x, y, xi)?;
    Ok(envelope_with_constant(envelope_constant(a, y)?, a, x, y, xi))
}

pub fn envelope_with_constant(constant: f64, a: f64, x: f64, y: f64, xi: f64) -> f64 {
    let p = x * y * xi;
    let s = x * y + x * xi + y * xi;
    let d = x * (xi - y) + y * xi;
    let ln = (2.0 * a - 0.5) * p.ln() + (1.0 - 2.0 * a) * s.ln() + xi - d * d / (4.0 * p);
    constant * ln.exp()
}

/// `x^{a+i tau} Psi(a+i tau, 1+2 i tau; x)` through the general complex evaluator.
fn kernel_factor(a: f64, tau: f64, x: f64) -> Result<Complex64> {
    let nu = Complex64::new(a, tau);
    let psi = kummer_psi(nu, Complex64::new(1.0, 2.0 * tau), x)?.value;
    Ok(psi * (nu * x.ln()).exp())
}

/// `q_a` from its spectral representation
/// `int_0^inf K(x,tau) K(y,tau) K(xi,tau) rho_a(tau) dtau`, an independent check
/// of the closed form. The imaginary part of the result measures the
/// asymmetry of the complex evaluations.
pub fn kernel_q_spectral(a: f64, x: f64, y: f64, xi: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("spectral representation needs a > 0, got {a}")));
    }
    check_triple(x, y, xi)?;
    let mut failure = None;
    let est = integrate_index(
        |tau| {
            let prod = kernel_factor(a, tau, x).and_then(|kx| Ok(kx * kernel_factor(a, tau, y)? * kernel_factor(a, tau, xi)?));
            match prod {
                Ok(v) => v * density_rho(a, tau),
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        cfg,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(est),
    }
}
