//! Double-exponential quadrature on the half line and on finite intervals.
//!
//! Half-line integrals use `x = scale * exp(pi/2 * sinh s)` followed by the
//! trapezoidal rule in `s`, which absorbs both algebraic endpoint weights at
//! the origin and exponential decay at infinity. Finite intervals (index
//! integrals) use the tanh-sinh map. Each refinement level halves the step and
//! reuses the previous nodes; the error estimate is the difference between
//! the last two levels.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Levels that are always computed before a convergence decision is taken.
const MIN_LEVELS: u32 = 3;
/// `|pi/2 sinh s|` is kept below this so the half-line abscissae stay normal.
const MAX_LOG_ABSCISSA: f64 = 690.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integrand returned a non-finite value {value} at abscissa {abscissa:e}")]
    NonFinite { abscissa: f64, value: Complex64 },
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
}

/// Tolerances and limits shared by every integration engine in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinement_levels: u32,
    /// Relative magnitude below which samples in the outer tails are treated
    /// as negligible and the outward sweep stops.
    pub x_truncation_bound: f64,
    /// Upper truncation point of index (tau) integrals and ceiling for
    /// [`QuadratureConfig::index_cutoff`].
    pub tau_max: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_refinement_levels: 8,
            x_truncation_bound: 1e-18,
            tau_max: 40.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        let bad = |msg: &str| Err(QuadError::InvalidConfig(msg.to_string()));
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return bad("rel_tol must be positive");
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return bad("abs_tol must be positive");
        }
        if self.max_refinement_levels < 1 {
            return bad("max_refinement_levels must be at least 1");
        }
        if !(self.x_truncation_bound > 0.0 && self.x_truncation_bound < 1.0) {
            return bad("x_truncation_bound must lie in (0, 1)");
        }
        if !(self.tau_max > 0.0 && self.tau_max.is_finite()) {
            return bad("tau_max must be positive");
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_tau_max(mut self, tau_max: f64) -> Self {
        self.tau_max = tau_max;
        self
    }

    pub fn with_max_levels(mut self, levels: u32) -> Self {
        self.max_refinement_levels = levels;
        self
    }

    fn tolerance(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }

    /// Truncation point for an index integral of order `a`.
    ///
    /// The integrands of the inversion formula are bounded by
    /// `tau^(2a + 3(a - 1/2)) exp(-pi tau / 2)`; the cutoff is the first point
    /// where this envelope drops below `abs_tol`, capped at `tau_max`.
    pub fn index_cutoff(&self, a: f64) -> f64 {
        let p = 2.0 * a + 3.0 * (a - 0.5);
        let log_env = |t: f64| p * t.ln() - FRAC_PI_2 * t;
        let target = self.abs_tol.ln();
        // The envelope is eventually decreasing; start beyond its maximum.
        let mut t = (2.0 * p / std::f64::consts::PI).max(1.0);
        while log_env(t) > target && t < self.tau_max {
            t += 0.25;
        }
        t.min(self.tau_max)
    }
}

/// Result of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: Complex64,
    /// Absolute error estimate.
    pub error_estimate: f64,
    pub nodes_used: usize,
    pub converged: bool,
    /// Quadrature approximation of `int |f|`; its ratio to `|value|` measures
    /// cancellation in the integrand.
    pub abs_integral: f64,
}

impl IntegralEstimate {
    fn combine(self, other: IntegralEstimate) -> IntegralEstimate {
        IntegralEstimate {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            nodes_used: self.nodes_used + other.nodes_used,
            converged: self.converged && other.converged,
            abs_integral: self.abs_integral + other.abs_integral,
        }
    }
}

fn checked<F>(f: &mut F, x: f64) -> Result<Complex64, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    let v = f(x);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(QuadError::NonFinite { abscissa: x, value: v })
    }
}

/// Node family of the exp-sinh rule: abscissa and Jacobian at `s`.
#[inline]
fn exp_sinh_node(s: f64, scale: f64) -> Option<(f64, f64)> {
    let u = FRAC_PI_2 * s.sinh();
    if u.abs() > MAX_LOG_ABSCISSA {
        return None;
    }
    let x = scale * u.exp();
    if x == 0.0 || !x.is_finite() {
        return None;
    }
    Some((x, x * FRAC_PI_2 * s.cosh()))
}

/// Sums `f(x(s)) x'(s)` over `s = s0 + k * step` for k = 0, ±1, ±2, ...
/// (only odd multiples of the half step when `odd` is set), sweeping outwards
/// until the terms become negligible.
fn sweep<F, N>(
    f: &mut F,
    node: &N,
    step: f64,
    odd: bool,
    reference: f64,
    cfg: &QuadratureConfig,
    count: &mut usize,
) -> Result<(Complex64, f64), QuadError>
where
    F: FnMut(f64) -> Complex64,
    N: Fn(f64) -> Option<(f64, f64)>,
{
    let mut total = Complex64::new(0.0, 0.0);
    let mut abs_total = reference;
    if !odd {
        if let Some((x, w)) = node(0.0) {
            let v = checked(f, x)? * w;
            *count += 1;
            total += v;
            abs_total += v.norm();
        }
    }
    for dir in [1.0f64, -1.0] {
        let mut k: u64 = 0;
        let mut small_run = 0;
        loop {
            let s = if odd {
                dir * (2 * k + 1) as f64 * step
            } else {
                dir * (k + 1) as f64 * step
            };
            k += 1;
            let Some((x, w)) = node(s) else { break };
            if w == 0.0 {
                break;
            }
            let v = checked(f, x)? * w;
            *count += 1;
            total += v;
            let mag = v.norm();
            abs_total += mag;
            if mag <= cfg.x_truncation_bound * abs_total || mag == 0.0 {
                small_run += 1;
                if small_run >= 3 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
    }
    Ok((total, abs_total - reference))
}

fn refine<F, N>(f: &mut F, node: N, h0: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate, QuadError>
where
    F: FnMut(f64) -> Complex64,
    N: Fn(f64) -> Option<(f64, f64)>,
{
    cfg.validate()?;
    let mut count = 0usize;
    let mut h = h0;
    let (mut sum, mut abs_sum) = sweep(f, &node, h, false, 0.0, cfg, &mut count)?;
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let max_levels = cfg.max_refinement_levels.max(1);
    for level in 1..=max_levels {
        h *= 0.5;
        let (part, abs_part) = sweep(f, &node, h, true, abs_sum, cfg, &mut count)?;
        sum += part;
        abs_sum += abs_part;
        let next = sum * h;
        error = (next - estimate).norm();
        estimate = next;
        if level >= MIN_LEVELS.min(max_levels) && error <= cfg.tolerance(estimate) {
            return Ok(IntegralEstimate {
                value: estimate,
                error_estimate: error,
                nodes_used: count,
                converged: true,
                abs_integral: abs_sum * h,
            });
        }
    }
    Ok(IntegralEstimate {
        value: estimate,
        error_estimate: error,
        nodes_used: count,
        converged: false,
        abs_integral: abs_sum * h,
    })
}

/// Integral of `f` over `(0, inf)`.
pub fn integrate_halfline<F>(f: F, cfg: &QuadratureConfig) -> Result<IntegralEstimate, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_halfline_scaled(f, 1.0, cfg)
}

/// Integral of `f` over `(0, inf)` with the node family centred at `scale`
/// (the place where most of the mass of `f` is expected).
pub fn integrate_halfline_scaled<F>(mut f: F, scale: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(QuadError::InvalidConfig(format!("scale must be positive, got {scale}")));
    }
    refine(&mut f, |s| exp_sinh_node(s, scale), 1.0, cfg)
}

/// Real-valued convenience wrapper around [`integrate_halfline_scaled`].
pub fn integrate_halfline_real<F>(mut f: F, scale: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate, QuadError>
where
    F: FnMut(f64) -> f64,
{
    integrate_halfline_scaled(|x| Complex64::new(f(x), 0.0), scale, cfg)
}

/// Integral of `f` over the finite interval `[lo, hi]` by tanh-sinh.
pub fn integrate_interval<F>(mut f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(QuadError::InvalidConfig(format!("bad interval [{lo}, {hi}]")));
    }
    if hi == lo {
        return Ok(IntegralEstimate {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            nodes_used: 0,
            converged: true,
            abs_integral: 0.0,
        });
    }
    let half = 0.5 * (hi - lo);
    let node = move |s: f64| {
        let u = FRAC_PI_2 * s.sinh();
        if u.abs() > 40.0 {
            return None;
        }
        // distance to the nearer endpoint, computed without cancellation
        let gap = 2.0 * half / ((2.0 * u.abs()).exp() + 1.0);
        if gap == 0.0 {
            return None;
        }
        let x = if u >= 0.0 { hi - gap } else { lo + gap };
        let ch = u.cosh();
        let w = half * FRAC_PI_2 * s.cosh() / (ch * ch);
        Some((x, w))
    };
    refine(&mut f, node, 1.0, cfg)
}

/// Index integral `int_0^inf g(tau) dtau`, truncated at `cfg.tau_max`.
///
/// The interval is split into panels of width at most 4 so that oscillatory
/// integrands are resolved locally. A tail bound `|g(tau_max)| * 2/pi`
/// (exponential decay at rate at least `pi/2`) is added to the error estimate.
pub fn integrate_index<F>(mut g: F, cfg: &QuadratureConfig) -> Result<IntegralEstimate, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    cfg.validate()?;
    let cut = cfg.tau_max;
    let panels = (cut / 4.0).ceil().max(1.0) as usize;
    let width = cut / panels as f64;
    let mut panel_cfg = *cfg;
    panel_cfg.abs_tol = cfg.abs_tol / panels as f64;
    let mut total: Option<IntegralEstimate> = None;
    for p in 0..panels {
        let lo = p as f64 * width;
        let hi = if p + 1 == panels { cut } else { lo + width };
        let est = integrate_interval(&mut g, lo, hi, &panel_cfg)?;
        total = Some(match total {
            None => est,
            Some(t) => t.combine(est),
        });
    }
    let mut total = total.expect("at least one panel");
    let tail = checked(&mut g, cut)?.norm() / FRAC_PI_2;
    total.error_estimate += tail;
    total.nodes_used += 1;
    total.converged = total.converged && total.error_estimate <= cfg.tolerance(total.value);
    Ok(total)
}

/// Fixed exp-sinh rule on `(0, inf)`: nodes and weights at step `2^-level`,
/// restricted to `|s| <= s_max`. Used where the same node set has to be
/// shared across many integrals (Nyström discretisation, cached grids).
pub fn exp_sinh_rule(level: u32, scale: f64, s_max: f64) -> Vec<(f64, f64)> {
    let h = 0.5f64.powi(level as i32);
    let n = (s_max / h).floor() as i64;
    (-n..=n)
        .filter_map(|k| exp_sinh_node(k as f64 * h, scale).map(|(x, w)| (x, w * h)))
        .collect()
}
