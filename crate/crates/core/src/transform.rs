//! The index Whittaker transform in confluent hypergeometric form,
//!
//! ```text
//! (Psi_a f)(tau)      = int_0^inf f(x) K_a(x, tau) m_a(x) dx
//! (Psi_a^{-1} phi)(x) = int_0^inf phi(tau) K_a(x, tau) rho_a(tau) dtau
//! K_a(x, tau)         = x^{a+i tau} Psi(a+i tau, 1+2i tau; x)
//! ```
//!
//! together with the classical Whittaker form, the map `Theta_a` between the
//! two and the differential operator `L_a` that the transform diagonalises.

use std::f64::consts::{LN_2, PI};
use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{fmt17, gauss_legendre, read_table, DecayClass, GridFunction};
use crate::kernels::ln_weight_m;
use crate::quadrature::QuadratureConfig;
use crate::specfun::{kummer_psi, kummer_psi_kernel, ln_gamma, whittaker_w};

/// Plancherel density `rho_a(tau) = pi^{-2} tau sinh(2 pi tau) |Gamma(a + i tau)|^2`.
pub fn density_rho(a: f64, tau: f64) -> f64 {
    let tau = tau.abs();
    if tau == 0.0 {
        return 0.0;
    }
    let s = 2.0 * PI * tau;
    // ln sinh(s) without overflow
    let ln_sinh = s + (-(-2.0 * s).exp_m1()).ln() - LN_2;
    let lg = ln_gamma(Complex64::new(a, tau)).map(|g| g.re).unwrap_or(f64::INFINITY);
    (-2.0 * PI.ln() + tau.ln() + ln_sinh + 2.0 * lg).exp()
}

/// Real transform kernel `x^{a+i tau} Psi(a+i tau, 1+2i tau; x)`.
pub fn kernel_value(a: f64, tau: f64, x: f64) -> Result<f64> {
    Ok(kummer_psi_kernel(a, tau, x)?.value.re)
}

/// Kernel at complex `tau` through the general evaluator.
pub fn kernel_value_complex(a: f64, tau: Complex64, x: f64) -> Result<Complex64> {
    let nu = Complex64::new(0.0, 1.0) * tau;
    let psi = kummer_psi(a + nu, 1.0 + 2.0 * nu, x)?.value;
    Ok(psi * ((a + nu) * x.ln()).exp())
}

/// Uniform `tau` grid on `[0, cutoff]`, the cutoff taken from the envelope rule.
pub fn tau_grid(a: f64, n: usize, cfg: &QuadratureConfig) -> Vec<f64> {
    let cut = cfg.index_cutoff(a);
    (0..n).map(|k| cut * k as f64 / (n - 1).max(1) as f64).collect()
}

/// Sampled transform together with the Plancherel density at each node.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformResult {
    pub a: f64,
    pub tau_nodes: Vec<f64>,
    pub values: Vec<Complex64>,
    pub density: Vec<f64>,
}

impl TransformResult {
    pub fn new(a: f64, tau_nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if tau_nodes.len() != values.len() || tau_nodes.len() < 2 {
            return Err(Error::domain("need at least two tau nodes with one value each"));
        }
        if tau_nodes[0] < 0.0 || tau_nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("tau nodes must be non-negative and strictly increasing"));
        }
        let density = tau_nodes.iter().map(|&t| density_rho(a, t)).collect();
        Ok(Self { a, tau_nodes, values, density })
    }

    /// Builds a result by sampling `phi` on `tau_nodes`.
    pub fn from_fn(a: f64, tau_nodes: &[f64], phi: impl FnMut(f64) -> Complex64) -> Result<Self> {
        Self::new(a, tau_nodes.to_vec(), tau_nodes.iter().copied().map(phi).collect())
    }

    /// Quadrature over `[tau_0, tau_last]`: Gauss-Legendre on each node
    /// interval, the transform interpolated by six-point Lagrange in `tau`.
    /// The callback receives `(tau, phi(tau), weight)`.
    pub fn quadrature_points(&self) -> Vec<(f64, Complex64, f64)> {
        let rule = gauss_legendre(8);
        let n = self.tau_nodes.len();
        let m = 6.min(n);
        let mut out = Vec::with_capacity((n - 1) * rule.len());
        for j in 0..n - 1 {
            let start = j.saturating_sub(m / 2 - 1).min(n - m);
            let ts = &self.tau_nodes[start..start + m];
            let (lo, hi) = (self.tau_nodes[j], self.tau_nodes[j + 1]);
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for &(s, w) in &rule {
                let t = mid + half * s;
                let mut phi = Complex64::new(0.0, 0.0);
                for (k, &tk) in ts.iter().enumerate() {
                    let l: f64 = ts
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != k)
                        .map(|(_, &ti)| (t - ti) / (tk - ti))
                        .product();
                    phi += self.values[start + k] * l;
                }
                out.push((t, phi, w * half));
            }
        }
        out
    }

    /// `int |phi|^2 rho_a dtau`, the right-hand side of the Plancherel identity.
    pub fn spectral_norm_sq(&self) -> f64 {
        self.quadrature_points()
            .iter()
            .map(|&(t, phi, w)| phi.norm_sqr() * density_rho(self.a, t) * w)
            .sum()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["tau", "re", "im", "rho"]).map_err(io)?;
        for ((t, v), r) in self.tau_nodes.iter().zip(&self.values).zip(&self.density) {
            w.write_record([fmt17(*t), fmt17(v.re), fmt17(v.im), fmt17(*r)]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }

    /// Reads `tau,re,im[,rho]`; the density is recomputed for order `a`.
    pub fn read_csv<R: Read>(input: R, a: f64) -> Result<Self> {
        let rows = read_table(input, &["tau", "re", "im"], &[])?;
        Self::new(
            a,
            rows.iter().map(|r| r[0]).collect(),
            rows.iter().map(|r| Complex64::new(r[1], r[2])).collect(),
        )
    }
}

fn check_order(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("transform order a must be positive, got {a}")))
    }
}

fn weighted_samples(f: &GridFunction, a: f64, w0: f64) -> Vec<(f64, Complex64)> {
    f.samples(w0, false, |x| ln_weight_m(a, x))
}

/// Forward transform `(Psi_a f)(tau)` at each requested `tau >= 0`.
pub fn forward(f: &GridFunction, a: f64, tau_nodes: &[f64], cfg: &QuadratureConfig) -> Result<TransformResult> {
    check_order(a)?;
    cfg.validate()?;
    // |K_a(x, tau)| <= x^a Psi(a, 1; x) ~ x^a log(1/x) at 0 and ~ 1 at infinity
    if !f.decay().integrable_against(-a - 1.0, -2.0 * a - 1.0, 1.0) {
        return Err(Error::domain(format!(
            "decay class {:?} is not integrable against x^a Psi(a,1;x) m_a(x) for a = {a}",
            f.decay()
        )));
    }
    let samples = weighted_samples(f, a, -a - 1.0);
    let mut values = Vec::with_capacity(tau_nodes.len());
    for &tau in tau_nodes {
        let mut s = Complex64::new(0.0, 0.0);
        for &(x, c) in &samples {
            s += c * kernel_value(a, tau, x)?;
        }
        values.push(s);
    }
    TransformResult::new(a, tau_nodes.to_vec(), values)
}

/// Transform at a complex point of the strip `|Im tau| <= nu`.
pub fn forward_at_complex(f: &GridFunction, a: f64, tau: Complex64, nu: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_order(a)?;
    cfg.validate()?;
    if !(nu >= 0.0) || tau.im.abs() > nu {
        return Err(Error::domain(format!("tau = {tau} lies outside the strip |Im tau| <= {nu}")));
    }
    if !f.decay().integrable_against(-a - nu - 1.0 - f64::EPSILON, -2.0 * a - 1.0, 1.0) {
        return Err(Error::domain(format!("decay class {:?} is not in L^(a,nu) for a = {a}, nu = {nu}", f.decay())));
    }
    if tau.im == 0.0 {
        return Ok(forward(f, a, &[tau.re, tau.re + 1.0], cfg)?.values[0]);
    }
    let mut s = Complex64::new(0.0, 0.0);
    for (x, c) in weighted_samples(f, a, -a - nu - 1.0) {
        s += c * kernel_value_complex(a, tau, x)?;
    }
    Ok(s)
}

/// Inverse transform evaluated at `x_nodes`. The result is tagged with the
/// decay class `x^a` at the origin and bounded at infinity, the behaviour of
/// the kernel; use [`GridFunction::with_decay`] when more is known.
pub fn inverse(phi: &TransformResult, x_nodes: &[f64], cfg: &QuadratureConfig) -> Result<GridFunction> {
    check_order(phi.a)?;
    cfg.validate()?;
    let a = phi.a;
    let pts: Vec<(f64, Complex64)> = phi
        .quadrature_points()
        .into_iter()
        .map(|(t, v, w)| (t, v * (density_rho(a, t) * w)))
        .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
        .collect();
    let mut values = Vec::with_capacity(x_nodes.len());
    for &x in x_nodes {
        let mut s = Complex64::new(0.0, 0.0);
        for &(t, c) in &pts {
            s += c * kernel_value(a, t, x)?;
        }
        values.push(s);
    }
    GridFunction::new(x_nodes.to_vec(), values, DecayClass::new(a, 0.0, 0.0))
}

/// Classical form `(W_alpha g)(tau) = int_0^inf g(x) W_{alpha, i tau}(x) x^{-2} dx`,
/// evaluated through the Whittaker function itself.
pub fn classical_forward(g: &GridFunction, alpha: f64, tau_nodes: &[f64], cfg: &QuadratureConfig) -> Result<TransformResult> {
    cfg.validate()?;
    if !(alpha < 0.5) {
        return Err(Error::domain(format!("classical transform needs alpha < 1/2, got {alpha}")));
    }
    // W_{alpha,0}(x) ~ x^{1/2} log x at 0 and x^alpha e^{-x/2} at infinity
    if !g.decay().integrable_against(-1.5, alpha - 2.0, 0.5) {
        return Err(Error::domain(format!("decay class {:?} is not integrable against W x^-2", g.decay())));
    }
    // W e^{x/2} x^{-1/2} is bounded; the rest goes into the weight
    let samples = g.samples(-1.5, false, |x| -1.5 * x.ln() - 0.5 * x);
    let mut values = Vec::with_capacity(tau_nodes.len());
    for &tau in tau_nodes {
        let nu = Complex64::new(0.0, tau);
        let mut s = Complex64::new(0.0, 0.0);
        for &(x, c) in &samples {
            let w = whittaker_w(Complex64::new(alpha, 0.0), nu, x)?.value;
            s += c * w * (0.5 * x - 0.5 * x.ln()).exp();
        }
        values.push(s);
    }
    TransformResult::new(0.5 - alpha, tau_nodes.to_vec(), values)
}

/// `(Theta_a f)(x) = x^{1/2 - a} e^{-x/2} f(x)`.
pub fn theta_map(f: &GridFunction, a: f64) -> GridFunction {
    let p = 0.5 - a;
    f.map(|x, v| v * (p * x.ln() - 0.5 * x).exp())
        .with_decay(f.decay().times(DecayClass::new(p, p, 0.5)))
}

/// `(L_a f)(x) = x^2 f'' - ((2a - 1) x + x^2) f'` on the nodes of `f`, with the
/// derivatives taken from the interpolant.
#[allow(non_snake_case)]
pub fn apply_L(f: &GridFunction, a: f64) -> Result<GridFunction> {
    if f.len() < 4 {
        return Err(Error::domain(format!("L_a needs at least 4 nodes, got {}", f.len())));
    }
    let values = (0..f.len())
        .map(|i| {
            let x = f.nodes()[i];
            let (_, d1, d2) = f.node_derivatives(i);
            d2 * (x * x) - d1 * ((2.0 * a - 1.0) * x + x * x)
        })
        .collect();
    let d = f.decay();
    GridFunction::new(f.nodes().to_vec(), values, DecayClass::new(d.zero_power, d.inf_power + 2.0, d.inf_rate))
}
