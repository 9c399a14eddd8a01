//! Functions on `(0, inf)` sampled on an ascending grid.
//!
//! Between nodes the function is a local Lagrange polynomial in `ln x`; beyond
//! the grid it follows the declared [`DecayClass`]. Integrals against grid
//! functions use a fixed mesh: Gauss-Legendre on every node interval (in
//! `ln x`) and exp-sinh rules on the two tails.

use std::io::{Read, Write};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::exp_sinh_rule;

/// Points in the local interpolation stencil.
const STENCIL: usize = 6;
/// Gauss-Legendre points per node interval.
const GL_POINTS: usize = 8;
/// Level and half-width of the exp-sinh tail rules.
const TAIL_LEVEL: u32 = 4;
/// Width in `ln x` of the Gauss-Legendre panels below the grid.
const HEAD_PANEL: f64 = 0.25;
const SMOOTH_HEAD_PANEL: f64 = 1.0;
const TAIL_S_MAX: f64 = 3.2;

/// Behaviour beyond the grid: `f(x) ~ x^zero_power` as `x -> 0` and
/// `f(x) ~ x^inf_power e^{-inf_rate x}` as `x -> inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayClass {
    pub zero_power: f64,
    pub inf_power: f64,
    pub inf_rate: f64,
}

impl DecayClass {
    pub fn new(zero_power: f64, inf_power: f64, inf_rate: f64) -> Self {
        Self { zero_power, inf_power, inf_rate }
    }

    /// Tails of `x^p e^{-q x}`.
    pub fn power_exp(p: f64, q: f64) -> Self {
        Self::new(p, p, q)
    }

    /// Class of the pointwise product with a function of class `other`.
    pub fn times(self, other: DecayClass) -> Self {
        Self::new(
            self.zero_power + other.zero_power,
            self.inf_power + other.inf_power,
            self.inf_rate + other.inf_rate,
        )
    }

    /// Whether `int_0^inf |f| x^c0 ... ` converges for a weight with power `w0`
    /// at the origin and tail `x^w_inf e^{-w_rate x}`.
    pub fn integrable_against(&self, w0: f64, w_inf: f64, w_rate: f64) -> bool {
        let head = self.zero_power + w0 > -1.0;
        let rate = self.inf_rate + w_rate;
        let tail = rate > 0.0 || (rate == 0.0 && self.inf_power + w_inf < -1.0);
        head && tail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interpolation {
    /// Six-point Lagrange interpolation in `ln x` of `f(x) x^{-p} e^{r x}`,
    /// with `p` and `r` the declared power at the origin and rate at infinity.
    LogLagrange,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    interpolation: Interpolation,
    decay: DecayClass,
}

/// `n` points spaced uniformly in `ln x` from `lo` to `hi` inclusive.
pub fn log_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| {
            if k + 1 == n {
                hi
            } else {
                (a + (b - a) * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn gl_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_POINTS))
}

fn tail_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| exp_sinh_rule(TAIL_LEVEL, 1.0, TAIL_S_MAX))
}

/// Lagrange basis values at `t` for the stencil `ts`.
fn lagrange_weights(ts: &[f64], t: f64, out: &mut [f64]) {
    for (j, o) in out.iter_mut().enumerate() {
        let mut l = 1.0;
        for (k, &tk) in ts.iter().enumerate() {
            if k != j {
                l *= (t - tk) / (ts[j] - tk);
            }
        }
        *o = l;
    }
}

/// First and second derivatives of the Lagrange basis at `t`.
fn lagrange_derivatives(ts: &[f64], t: f64, d1: &mut [f64], d2: &mut [f64]) {
    let m = ts.len();
    for j in 0..m {
        let (mut s1, mut s2) = (0.0, 0.0);
        for k in (0..m).filter(|&k| k != j) {
            let mut p = 1.0 / (ts[j] - ts[k]);
            for l in (0..m).filter(|&l| l != j && l != k) {
                p *= (t - ts[l]) / (ts[j] - ts[l]);
            }
            s1 += p;
            for l in (0..m).filter(|&l| l != j && l != k) {
                let mut q = 1.0 / ((ts[j] - ts[k]) * (ts[j] - ts[l]));
                for r in (0..m).filter(|&r| r != j && r != k && r != l) {
                    q *= (t - ts[r]) / (ts[j] - ts[r]);
                }
                s2 += q;
            }
        }
        d1[j] = s1;
        d2[j] = s2;
    }
}

impl GridFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>, decay: DecayClass) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::domain(format!("{} nodes but {} values", nodes.len(), values.len())));
        }
        if nodes.len() < 2 {
            return Err(Error::domain("a grid function needs at least two nodes"));
        }
        if !(nodes[0] > 0.0) {
            return Err(Error::domain(format!("nodes must be positive, got {}", nodes[0])));
        }
        if let Some(w) = nodes.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::domain(format!("nodes must be strictly increasing and finite ({} then {})", w[0], w[1])));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::domain(format!("value {v} at node {} is not finite", nodes[i])));
        }
        Ok(Self { nodes, values, interpolation: Interpolation::LogLagrange, decay })
    }

    pub fn from_fn(nodes: &[f64], decay: DecayClass, mut f: impl FnMut(f64) -> Complex64) -> Result<Self> {
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self::new(nodes.to_vec(), values, decay)
    }

    pub fn from_real_fn(nodes: &[f64], decay: DecayClass, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        Self::from_fn(nodes, decay, |x| Complex64::new(f(x), 0.0))
    }

    /// The zero function on `nodes`.
    pub fn zero(nodes: &[f64]) -> Result<Self> {
        Self::from_real_fn(nodes, DecayClass::new(f64::INFINITY, 0.0, f64::INFINITY), |_| 0.0)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn with_decay(mut self, decay: DecayClass) -> Self {
        self.decay = decay;
        self
    }

    /// Pointwise map of the node values; the decay class is kept.
    pub fn map(&self, mut f: impl FnMut(f64, Complex64) -> Complex64) -> Self {
        let values = self.nodes.iter().zip(&self.values).map(|(&x, &v)| f(x, v)).collect();
        Self { values, ..self.clone() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| v * c)
    }

    fn stencil_start(&self, interval: usize) -> usize {
        let m = STENCIL.min(self.len());
        interval.saturating_sub(m / 2 - 1).min(self.len() - m)
    }

    fn interval_of(&self, x: f64) -> usize {
        let i = self.nodes.partition_point(|&n| n <= x);
        i.saturating_sub(1).min(self.len() - 2)
    }

    /// Value at `x > 0`, interpolated inside the grid and extrapolated outside.
    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.len();
        let (x0, xn) = (self.nodes[0], self.nodes[n - 1]);
        if x < x0 {
            return self.head(x);
        }
        if x > xn {
            return self.tail(x);
        }
        self.interpolate(self.interval_of(x), x.ln())
    }

    /// `f(x)` as `base * e^{ln_scale}`, so that tail values far outside the
    /// grid can be combined with large weights before exponentiating.
    pub fn eval_scaled(&self, x: f64) -> (Complex64, f64) {
        let n = self.len();
        let (x0, xn) = (self.nodes[0], self.nodes[n - 1]);
        let zero = Complex64::new(0.0, 0.0);
        if x < x0 {
            let v = self.values[0];
            return if v == zero { (v, 0.0) } else { (v, self.decay.zero_power * (x / x0).ln()) };
        }
        if x > xn {
            let v = self.values[n - 1];
            let d = self.decay;
            return if v == zero { (v, 0.0) } else { (v, d.inf_power * (x / xn).ln() - d.inf_rate * (x - xn)) };
        }
        (self.interpolate(self.interval_of(x), x.ln()), 0.0)
    }

    fn head(&self, x: f64) -> Complex64 {
        let p = self.decay.zero_power;
        if self.values[0] == Complex64::new(0.0, 0.0) {
            return self.values[0];
        }
        self.values[0] * (p * (x / self.nodes[0]).ln()).exp()
    }

    fn tail(&self, x: f64) -> Complex64 {
        let n = self.len();
        let xn = self.nodes[n - 1];
        if self.values[n - 1] == Complex64::new(0.0, 0.0) {
            return self.values[n - 1];
        }
        let d = self.decay;
        self.values[n - 1] * (d.inf_power * (x / xn).ln() - d.inf_rate * (x - xn)).exp()
    }

    /// Exponential rate and power divided out before interpolating, so that
    /// functions of the declared class interpolate exactly.
    fn profile(&self) -> (f64, f64) {
        let finite = |v: f64| if v.is_finite() { v } else { 0.0 };
        (finite(self.decay.inf_rate), finite(self.decay.zero_power))
    }

    fn interpolate(&self, interval: usize, t: f64) -> Complex64 {
        let start = self.stencil_start(interval);
        let m = STENCIL.min(self.len());
        let (r, p) = self.profile();
        let xc = self.nodes[start + m / 2];
        let lc = xc.ln();
        // u = f e^{r (x - xc)} (x / xc)^{-p}
        let strip = |x: f64, lx: f64| (r * (x - xc) - p * (lx - lc)).exp();
        let mut ts = [0.0; STENCIL];
        for (k, t) in ts[..m].iter_mut().enumerate() {
            *t = self.nodes[start + k].ln();
        }
        let mut w = [0.0; STENCIL];
        lagrange_weights(&ts[..m], t, &mut w[..m]);
        let u: Complex64 = (0..m)
            .map(|k| self.values[start + k] * (w[k] * strip(self.nodes[start + k], ts[k])))
            .sum();
        u / strip(t.exp(), t)
    }

    /// Value and first two derivatives (in `x`) of the interpolant at node `i`,
    /// using a centred seven-point stencil in `ln x`.
    pub fn node_derivatives(&self, i: usize) -> (Complex64, Complex64, Complex64) {
        let m = 7.min(self.len());
        let start = i.saturating_sub(m / 2).min(self.len() - m);
        let ts: Vec<f64> = self.nodes[start..start + m].iter().map(|x| x.ln()).collect();
        let (mut d1, mut d2) = (vec![0.0; m], vec![0.0; m]);
        let x = self.nodes[i];
        let lx = x.ln();
        lagrange_derivatives(&ts, lx, &mut d1, &mut d2);
        // f = u phi with phi = e^{-r (x - x_i)} (x / x_i)^p, phi(x_i) = 1
        let (r, p) = self.profile();
        let u = |k: usize| self.values[start + k] * (r * (self.nodes[start + k] - x) - p * (ts[k] - lx)).exp();
        let g1: Complex64 = (0..m).map(|k| u(k) * d1[k]).sum();
        let g2: Complex64 = (0..m).map(|k| u(k) * d2[k]).sum();
        let f = self.values[i];
        // u' = g'/x, u'' = (g'' - g')/x^2 with g(t) = u(e^t)
        let (u1, u2) = (g1 / x, (g2 - g1) / (x * x));
        let l1 = p / x - r;
        let l2 = l1 * l1 - p / (x * x);
        (f, u1 + f * l1, u2 + u1 * (2.0 * l1) + f * l2)
    }

    /// Quadrature nodes and weights covering `(0, inf)` for integrals of this
    /// function against weights that are bounded at the origin.
    pub fn mesh(&self) -> Vec<(f64, f64)> {
        self.mesh_for(0.0)
    }

    /// Mesh for integrals against a weight behaving like `x^w0` at the origin;
    /// the head rule is extended until `x^{zero_power + w0 + 1}` is negligible.
    pub fn mesh_for(&self, w0: f64) -> Vec<(f64, f64)> {
        integration_mesh(&self.nodes, self.decay.zero_power + w0 + 1.0, HEAD_PANEL)
    }

    /// As [`GridFunction::mesh_for`], with wider head panels for integrands
    /// that do not oscillate in `ln x` below the grid.
    pub fn mesh_smooth(&self, w0: f64) -> Vec<(f64, f64)> {
        integration_mesh(&self.nodes, self.decay.zero_power + w0 + 1.0, SMOOTH_HEAD_PANEL)
    }

    /// `int_0^inf f(x) w(x) dx` on the fixed mesh.
    pub fn integrate(&self, mut w: impl FnMut(f64) -> Complex64) -> Complex64 {
        self.mesh_values()
            .iter()
            .map(|&(x, wt, fx)| if fx == Complex64::new(0.0, 0.0) { fx } else { fx * w(x) * wt })
            .sum()
    }

    /// Mesh points `(x, b, l)` with `f(x) w = b e^l`, for a weight behaving
    /// like `x^w0` at the origin. Zero and non-finite values are skipped.
    pub fn ln_samples(&self, w0: f64, smooth: bool) -> Vec<(f64, Complex64, f64)> {
        let mesh = if smooth { self.mesh_smooth(w0) } else { self.mesh_for(w0) };
        mesh.into_iter()
            .filter_map(|(x, w)| {
                let (base, ln_scale) = self.eval_scaled(x);
                let ok = base != Complex64::new(0.0, 0.0) && base.re.is_finite() && base.im.is_finite();
                ok.then_some((x, base, ln_scale + w.ln()))
            })
            .collect()
    }

    /// Mesh points `(x, f(x) w e^{ln_weight(x)})`, formed in log space so
    /// that the far head cannot overflow. Terms that underflow are dropped.
    pub fn samples(&self, w0: f64, smooth: bool, ln_weight: impl Fn(f64) -> f64) -> Vec<(f64, Complex64)> {
        self.ln_samples(w0, smooth)
            .into_iter()
            .map(|(x, b, l)| (x, b * (l + ln_weight(x)).exp()))
            .filter(|(_, c)| c != &Complex64::new(0.0, 0.0) && c.re.is_finite() && c.im.is_finite())
            .collect()
    }

    /// Mesh abscissae, weights and interpolated values.
    pub fn mesh_values(&self) -> Vec<(f64, f64, Complex64)> {
        self.mesh().into_iter().map(|(x, w)| (x, w, self.eval(x))).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["x", "re", "im"]).map_err(io)?;
        for (x, v) in self.nodes.iter().zip(&self.values) {
            w.write_record([fmt17(*x), fmt17(v.re), fmt17(v.im)]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }

    /// Reads `x,re,im` rows (the `im` column may be omitted).
    pub fn read_csv<R: Read>(input: R, decay: DecayClass) -> Result<Self> {
        let rows = read_table(input, &["x", "re"], &["im"])?;
        let nodes = rows.iter().map(|r| r[0]).collect();
        let values = rows.iter().map(|r| Complex64::new(r[1], r.get(2).copied().unwrap_or(0.0))).collect();
        Self::new(nodes, values, decay)
    }
}

/// Mesh on `(0, inf)` refining the given ascending nodes. Below the grid the
/// integrand is taken to decay like `x^head_decay` (per unit `dx / x`).
pub fn integration_mesh(nodes: &[f64], head_decay: f64, head_panel: f64) -> Vec<(f64, f64)> {
    let n = nodes.len();
    let (x0, xn) = (nodes[0], nodes[n - 1]);
    let mut mesh = Vec::with_capacity((n - 1) * GL_POINTS + 2 * tail_rule().len());
    // head: x = x0 e^{-u}. Kernels oscillate like e^{i tau u} here, so the rule
    // is composite Gauss-Legendre in u rather than exp-sinh.
    if head_decay > 0.0 {
        let u_max = (37.0 / head_decay).min(700.0 + x0.ln());
        let panels = (u_max / head_panel).ceil() as usize;
        for p in (0..panels).rev() {
            let (lo, hi) = (p as f64 * head_panel, (p + 1) as f64 * head_panel);
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for &(s, w) in gl_rule().iter().rev() {
                let x = x0 * (-(mid + half * s)).exp();
                mesh.push((x, w * half * x));
            }
        }
    }
    for pair in nodes.windows(2) {
        let (ta, tb) = (pair[0].ln(), pair[1].ln());
        let (mid, half) = (0.5 * (ta + tb), 0.5 * (tb - ta));
        for &(s, w) in gl_rule() {
            let x = (mid + half * s).exp();
            mesh.push((x, w * half * x));
        }
    }
    // tail: x = xn + v
    for &(v, w) in tail_rule() {
        if v < 700.0 {
            mesh.push((xn + v, w));
        }
    }
    mesh
}

pub(crate) fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Numeric CSV table with a mandatory header. Columns are matched by name;
/// `optional` columns may be absent.
pub(crate) fn read_table<R: Read>(input: R, required: &[&str], optional: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let parse_err = |line: usize, column: usize, message: String| Error::Parse { line, column, message };
    let headers = rdr.headers().map_err(|e| parse_err(1, 1, e.to_string()))?.clone();
    let mut cols = Vec::new();
    for name in required {
        match headers.iter().position(|h| h == *name) {
            Some(i) => cols.push(i),
            None => return Err(parse_err(1, 1, format!("missing column '{name}' in header"))),
        }
    }
    for name in optional {
        if let Some(i) = headers.iter().position(|h| h == *name) {
            cols.push(i);
        }
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, 1, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut row = Vec::with_capacity(cols.len());
        for &c in &cols {
            let field = rec.get(c).ok_or_else(|| parse_err(line, c + 1, "missing field".into()))?;
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(line, c + 1, format!("'{field}' is not a number")))?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xe(nodes: &[f64]) -> GridFunction {
        GridFunction::from_real_fn(nodes, DecayClass::power_exp(1.0, 1.0), |x| x * (-x).exp()).unwrap()
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = gauss_legendre(8);
        let s: f64 = rule.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-15);
        let s: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn interpolation_and_tails() {
        let nodes = log_nodes(1e-3, 40.0, 160);
        let f = xe(&nodes);
        // below the grid the declared power law x^1 takes over from the node value
        let head = 1e-5 * (-1e-3f64).exp();
        assert!((f.eval(1e-5).re - head).abs() < 1e-15 * head);
        for x in [2e-3f64, 0.37, 1.0, 7.7, 39.0, 80.0] {
            let exact = x * (-x).exp();
            assert!((f.eval(x).re - exact).abs() < 1e-8 * exact.max(1e-3), "x={x} {} {exact}", f.eval(x).re);
        }
    }

    #[test]
    fn integrals_on_mesh() {
        let nodes = log_nodes(1e-6, 40.0, 220);
        let f = xe(&nodes);
        // int x e^{-x} x^{-1/2} dx = Gamma(3/2)
        let v = f.integrate(|x| Complex64::new(x.powf(-0.5), 0.0));
        assert!((v.re - 0.886_226_925_452_758).abs() < 1e-9, "{v}");
    }

    #[test]
    fn derivatives_at_nodes() {
        let nodes = log_nodes(1e-2, 30.0, 200);
        let f = GridFunction::from_real_fn(&nodes, DecayClass::power_exp(2.0, 1.0), |x| x * x * (-x).exp()).unwrap();
        for i in [3, 50, 120, 196] {
            let x = nodes[i];
            let (_, d1, d2) = f.node_derivatives(i);
            let e = (-x).exp();
            let (e1, e2) = ((2.0 * x - x * x) * e, (2.0 - 4.0 * x + x * x) * e);
            // relative to sup f = 4 e^{-2}
            assert!((d1.re - e1).abs() < 1e-7, "i={i} {} {e1}", d1.re);
            assert!((d2.re - e2).abs() < 1e-6, "i={i} {} {e2}", d2.re);
        }
    }

    #[test]
    fn csv_round_trip() {
        let nodes = log_nodes(0.1, 10.0, 12);
        let f = GridFunction::from_fn(&nodes, DecayClass::power_exp(1.0, 1.0), |x| Complex64::new(x.sin(), x.cos() / 3.0)).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let g = GridFunction::read_csv(buf.as_slice(), f.decay()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn csv_errors_carry_position() {
        let text = "x,re,im\n1,2,3\n2,oops,0\n";
        match GridFunction::read_csv(text.as_bytes(), DecayClass::power_exp(0.0, 1.0)) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            GridFunction::read_csv("x,im\n1,2\n".as_bytes(), DecayClass::power_exp(0.0, 1.0)),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_bad_nodes() {
        let v = vec![Complex64::new(1.0, 0.0); 3];
        assert!(GridFunction::new(vec![1.0, 1.0, 2.0], v.clone(), DecayClass::power_exp(0.0, 1.0)).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0, 2.0], v, DecayClass::power_exp(0.0, 1.0)).is_err());
    }

    proptest! {
        #[test]
        fn interpolant_reproduces_node_values(seed in proptest::collection::vec(-5.0f64..5.0, 8..20)) {
            let nodes = log_nodes(0.01, 20.0, seed.len());
            let g = GridFunction::from_fn(&nodes, DecayClass::power_exp(0.0, 1.0), {
                let mut it = seed.iter();
                move |_| Complex64::new(*it.next().unwrap(), 0.0)
            }).unwrap();
            for (x, v) in nodes.iter().zip(&seed) {
                prop_assert!((g.eval(*x).re - v).abs() <= 1e-12 * (1.0 + v.abs()));
            }
        }

        #[test]
        fn integration_is_linear(p in 0.5f64..3.0, q in 0.5f64..2.0, c in -3.0f64..3.0) {
            let nodes = log_nodes(1e-3, 40.0, 80);
            let f = GridFunction::from_real_fn(&nodes, DecayClass::power_exp(p, q), |x| x.powf(p) * (-q * x).exp()).unwrap();
            let g = f.map(|x, v| v * c + x.cos());
            let w = |x: f64| Complex64::new((-x).exp(), 0.0);
            let lhs = g.integrate(w);
            let rhs = f.integrate(w) * c + f.map(|x, _| Complex64::new(x.cos(), 0.0)).integrate(w);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }
}
