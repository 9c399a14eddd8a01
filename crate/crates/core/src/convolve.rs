//! Generalized translation and the index Whittaker convolution:
//!
//! ```text
//! (T_a^y f)(x)   = int_0^inf f(xi) q_a(x, y, xi) m_a(xi) dxi
//! (f *_a g)(x)   = int_0^inf (T_a^x f)(xi) g(xi) m_a(xi) dxi
//! ```
//!
//! Both are computed on the integration meshes of the inputs with the cached
//! kernel [`QKernel`]. Kernel values whose log-prefactor is below the double
//! range are skipped before `D` is evaluated, which truncates every inner
//! integral to the region where the kernel is not negligible.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{DecayClass, GridFunction};
use crate::kernels::{ln_weight_m, QKernel};
use crate::quadrature::QuadratureConfig;
use crate::specfun::kummer_psi;

/// One translation `T_a^y f` evaluated at `nodes`.
#[derive(Debug, Clone)]
pub struct TranslationRequest {
    pub f: GridFunction,
    pub a: f64,
    pub y: f64,
    pub nodes: Vec<f64>,
}

fn check(a: f64, points: &[f64]) -> Result<()> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("order a must be >= 0, got {a}")));
    }
    if let Some(p) = points.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
        return Err(Error::domain(format!("evaluation points must be positive, got {p}")));
    }
    Ok(())
}

/// Log-form mesh samples of `f` for integrals against `q_a(., ., xi) m_a(xi)`.
/// The kernel vanishes faster than any power as `xi -> 0`, so the head is
/// only cut off by the mesh, and at infinity it decays at least like `e^{-xi}`.
fn kernel_samples(f: &GridFunction, extra_w0: f64) -> Result<Vec<(f64, Complex64, f64)>> {
    let d = f.decay();
    if !d.integrable_against(f64::INFINITY, -1.0, 1.0) {
        return Err(Error::domain(format!("decay class {d:?} grows too fast at infinity for the translation kernel")));
    }
    // head mesh tuned for an integrand decaying like x^{1 + extra_w0} per dx / x
    Ok(f.ln_samples(extra_w0 - d.zero_power, true))
}

fn translate_samples(samples: &[(f64, Complex64, f64)], kernel: &QKernel, x: f64, y: f64) -> Complex64 {
    samples
        .iter()
        .map(|&(xi, b, l)| {
            let ln = l + kernel.ln_q_weighted(x, y, xi);
            if ln < -745.0 {
                Complex64::new(0.0, 0.0)
            } else {
                b * ln.exp()
            }
        })
        .sum()
}

/// `(T_a^y f)(x)` at each requested node.
pub fn translate(req: &TranslationRequest, cfg: &QuadratureConfig) -> Result<GridFunction> {
    cfg.validate()?;
    check(req.a, &req.nodes)?;
    check(req.a, &[req.y])?;
    let kernel = QKernel::new(req.a)?;
    let samples = kernel_samples(&req.f, 0.0)?;
    let values = req.nodes.iter().map(|&x| translate_samples(&samples, &kernel, x, req.y)).collect();
    // T^y x^b behaves like x^b at the origin and tends to f(y) at infinity
    let decay = DecayClass::new(req.f.decay().zero_power, 0.0, 0.0);
    GridFunction::new(req.nodes.clone(), values, decay)
}

/// Closed form of the translation of a power:
/// `T_a^y [xi^beta](x) = (xy)^beta Psi(beta, 1 - 2a + 2beta; x + y)`.
pub fn translate_power(a: f64, beta: Complex64, x: f64, y: f64) -> Result<Complex64> {
    check(0.0, &[x, y])?;
    let psi = kummer_psi(beta, 1.0 - 2.0 * a + 2.0 * beta, x + y)?.value;
    Ok(psi * (beta * (x * y).ln()).exp())
}

/// `(f *_a g)(x)` at each requested node.
pub fn convolve(f: &GridFunction, g: &GridFunction, a: f64, nodes: &[f64], cfg: &QuadratureConfig) -> Result<GridFunction> {
    cfg.validate()?;
    check(a, nodes)?;
    let kernel = QKernel::new(a)?;
    let fs = kernel_samples(f, 0.0)?;
    // outer integrand g(xi) m_a(xi) (T^x f)(xi) ~ xi^{p_f + p_g - 2a - 1} at the origin
    let (pf, pg) = (f.decay().zero_power, g.decay().zero_power);
    if !(pf + pg - 2.0 * a > 0.0) {
        return Err(Error::domain(format!("convolution diverges at the origin: p_f + p_g = {} <= 2a = {}", pf + pg, 2.0 * a)));
    }
    if !g.decay().integrable_against(f64::INFINITY, -2.0 * a - 1.0, 1.0) {
        return Err(Error::domain(format!("decay class {:?} is not integrable against m_a at infinity", g.decay())));
    }
    let gs = g.samples(pf - 2.0 * a - 1.0, true, |x| ln_weight_m(a, x));
    let values = nodes
        .iter()
        .map(|&x| gs.iter().map(|&(xi, d)| d * translate_samples(&fs, &kernel, xi, x)).sum())
        .collect();
    let p = f.decay().zero_power.min(g.decay().zero_power);
    GridFunction::new(nodes.to_vec(), values, DecayClass::new(p, 0.0, 0.0))
}

/// Norm in `L_p^a`, `(int |f|^p m_a dx)^{1/p}`; `p = inf` is the maximum
/// over the grid nodes (a grid supremum, not an essential supremum).
pub fn norm_p(f: &GridFunction, a: f64, p: f64) -> Result<f64> {
    if p.is_infinite() {
        return Ok(f.values().iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    if !(p >= 1.0) {
        return Err(Error::domain(format!("norm exponent must be >= 1, got {p}")));
    }
    let d = f.decay();
    let powered = DecayClass::new(p * d.zero_power, p * d.inf_power, p * d.inf_rate);
    if !powered.integrable_against(-2.0 * a - 1.0, -2.0 * a - 1.0, 1.0) {
        return Err(Error::domain(format!("|f|^{p} is not integrable against m_a for decay class {d:?}")));
    }
    let g = f.map(|_, v| Complex64::new(v.norm().powf(p), 0.0)).with_decay(powered);
    let s: f64 = g.samples(-2.0 * a - 1.0, true, |x| ln_weight_m(a, x)).iter().map(|(_, c)| c.re).sum();
    Ok(s.powf(1.0 / p))
}

/// Norm of `L^{a,nu}`: `int |f(x)| x^{a+nu} Psi(a+nu, 1+2nu; x) m_a(x) dx`.
pub fn norm_a_nu(f: &GridFunction, a: f64, nu: f64) -> Result<f64> {
    if !(a > 0.0 && nu >= 0.0) {
        return Err(Error::domain(format!("need a > 0 and nu >= 0, got a = {a}, nu = {nu}")));
    }
    // x^{a+nu} Psi ~ x^{a-nu} at 0 (with a logarithm when nu = 0), ~ 1 at infinity
    let w0 = a - nu - 2.0 * a - 1.0 - if nu == 0.0 { f64::EPSILON } else { 0.0 };
    if !f.decay().integrable_against(w0, -2.0 * a - 1.0, 1.0) {
        return Err(Error::domain(format!("decay class {:?} is not in L^(a,nu)", f.decay())));
    }
    let g = f.map(|_, v| Complex64::new(v.norm(), 0.0));
    let b = Complex64::new(a + nu, 0.0);
    let mut s = 0.0;
    for (x, c) in g.samples(w0, true, |x| ln_weight_m(a, x)) {
        let k = kummer_psi(b, Complex64::new(1.0 + 2.0 * nu, 0.0), x)?.value.re * (b.re * x.ln()).exp();
        s += c.re * k;
    }
    Ok(s)
}
