use std::path::PathBuf;

use clap::{Args, ValueEnum};
use iwt_core::convolve::{convolve, norm_p};
use iwt_core::grid::{log_nodes, DecayClass, GridFunction};
use iwt_core::kernels::{kernel_k, QKernel};
use iwt_core::quadrature::integrate_halfline_scaled;
use iwt_core::specfun::{bessel_k, whittaker_w};
use iwt_core::transform::{apply_L, forward, tau_grid};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::fail::{CliError, CliResult};
use crate::parse;

/// Registered identities. The tolerance of each is fixed here.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// W(x) W(y) = int_0^inf k_alpha(x, y, xi) W(xi) xi^-2 dxi for W = W_{alpha, i tau}.
    ProductFormula,
    /// K(x) K(y) = 1/2 int_0^inf exp(-xy/(2 xi) - xi (x/y + y/x)/2) K(xi) dxi / xi for K = K_{i tau}.
    Macdonald,
    /// int_0^inf q_a(x, y, xi) m_a(xi) dxi = 1.
    Normalization,
    /// ||f||_{2,a}^2 = int_0^inf |transform of f|^2 rho_a(tau) dtau for f = x^p e^{-qx}.
    Plancherel,
    /// The transform of f * g equals the product of transforms, f = x^p e^{-qx}, g = x^p2 e^{-q2 x}.
    Factorization,
    /// The transform of L_a f equals -(tau^2 + a^2) times the transform of f, f = x^p e^{-qx}.
    Diagonalization,
}

impl Identity {
    pub fn tolerance(self) -> f64 {
        match self {
            Identity::ProductFormula => 1e-6,
            Identity::Macdonald | Identity::Normalization => 1e-8,
            Identity::Plancherel | Identity::Factorization | Identity::Diagonalization => 1e-4,
        }
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    identity: Identity,
    #[arg(long, default_value_t = -0.5)]
    alpha: f64,
    #[arg(long = "a", default_value_t = 1.0)]
    a: f64,
    /// Single value or lo:step:hi.
    #[arg(long, default_value = "1")]
    tau: String,
    #[arg(long, default_value_t = 1.0)]
    x: f64,
    #[arg(long, default_value_t = 2.0)]
    y: f64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 2.0)]
    p2: f64,
    #[arg(long, default_value_t = 1.0)]
    q2: f64,
    /// Report path; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Sample {
    tau: Option<f64>,
    lhs: [f64; 2],
    rhs: [f64; 2],
    residual: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Report {
    identity: Identity,
    tolerance: f64,
    parameters: serde_json::Value,
    samples: Vec<Sample>,
    max_residual: f64,
    pass: bool,
}

fn sample(tau: Option<f64>, lhs: Complex64, rhs: Complex64, tol: f64, absolute: bool) -> Sample {
    let residual = if absolute { (lhs - rhs).norm() } else { (lhs - rhs).norm() / lhs.norm() };
    Sample { tau, lhs: [lhs.re, lhs.im], rhs: [rhs.re, rhs.im], residual, pass: residual <= tol }
}

fn power_exp(nodes: &[f64], p: f64, q: f64) -> CliResult<GridFunction> {
    Ok(GridFunction::from_real_fn(nodes, DecayClass::power_exp(p, q), |x| x.powf(p) * (-q * x).exp())?)
}

/// Nodes on which x^p e^{-qx} is represented; the interpolant is exact for
/// this family, so a moderate count suffices.
fn family_nodes() -> Vec<f64> {
    log_nodes(1e-7, 60.0, 100)
}

pub fn run(args: &VerifyArgs, cfg: &RunConfig) -> CliResult<bool> {
    let id = args.identity;
    let tol = id.tolerance();
    let qc = &cfg.quadrature;
    let taus = parse::tau_range(&args.tau)?;
    let c = |r: f64| Complex64::new(r, 0.0);
    let mut samples = Vec::new();
    let parameters = match id {
        Identity::ProductFormula => {
            let alpha = c(args.alpha);
            for &t in &taus {
                let nu = Complex64::new(0.0, t);
                let lhs = whittaker_w(alpha, nu, args.x)?.value * whittaker_w(alpha, nu, args.y)?.value;
                let mut failure = None;
                let rhs = integrate_halfline_scaled(
                    |xi| {
                        let v = kernel_k(alpha, args.x, args.y, xi).and_then(|k| {
                            if k == c(0.0) {
                                return Ok(k);
                            }
                            Ok(whittaker_w(alpha, nu, xi)?.value * k / (xi * xi))
                        });
                        v.unwrap_or_else(|e| {
                            failure.get_or_insert(e);
                            c(0.0)
                        })
                    },
                    1.0,
                    qc,
                )?
                .value;
                if let Some(e) = failure {
                    return Err(e.into());
                }
                samples.push(sample(Some(t), lhs, rhs, tol, false));
            }
            serde_json::json!({ "alpha": args.alpha, "x": args.x, "y": args.y })
        }
        Identity::Macdonald => {
            let (x, y) = (args.x, args.y);
            for &t in &taus {
                let nu = Complex64::new(0.0, t);
                let lhs = bessel_k(nu, x)?.value * bessel_k(nu, y)?.value;
                let mut failure = None;
                let rhs = integrate_halfline_scaled(
                    |xi| {
                        let e = (-x * y / (2.0 * xi) - x * xi / (2.0 * y) - y * xi / (2.0 * x)).exp();
                        if e == 0.0 {
                            return c(0.0);
                        }
                        match bessel_k(nu, xi) {
                            Ok(k) => 0.5 * k.value * e / xi,
                            Err(err) => {
                                failure.get_or_insert(err);
                                c(0.0)
                            }
                        }
                    },
                    1.0,
                    qc,
                )?
                .value;
                if let Some(e) = failure {
                    return Err(e.into());
                }
                samples.push(sample(Some(t), lhs, rhs, tol, false));
            }
            serde_json::json!({ "x": x, "y": y })
        }
        Identity::Normalization => {
            let qk = QKernel::new(args.a)?;
            let (x, y) = (args.x, args.y);
            let est = integrate_halfline_scaled(|xi| c(qk.q_weighted(x, y, xi)), x * y / (x + y), qc)?;
            samples.push(sample(None, c(1.0), est.value, tol, true));
            serde_json::json!({ "a": args.a, "x": x, "y": y })
        }
        Identity::Plancherel => {
            let f = power_exp(&family_nodes(), args.p, args.q)?;
            let lhs = norm_p(&f, args.a, 2.0)?.powi(2);
            let rhs = forward(&f, args.a, &tau_grid(args.a, cfg.tau_points.max(360), qc), qc)?.spectral_norm_sq();
            samples.push(sample(None, c(lhs), c(rhs), tol, false));
            serde_json::json!({ "a": args.a, "p": args.p, "q": args.q })
        }
        Identity::Factorization => {
            let coarse = log_nodes(1e-6, 80.0, 60);
            let f = power_exp(&coarse, args.p, args.q)?;
            let g = power_exp(&coarse, args.p2, args.q2)?;
            let fg = convolve(&f, &g, args.a, &log_nodes(1e-9, 60.0, 170), qc)?;
            let padded = padded(&taus);
            let (h, tf, tg) = (forward(&fg, args.a, &padded, qc)?, forward(&f, args.a, &padded, qc)?, forward(&g, args.a, &padded, qc)?);
            for (i, &t) in taus.iter().enumerate() {
                samples.push(sample(Some(t), tf.values[i] * tg.values[i], h.values[i], tol, false));
            }
            serde_json::json!({ "a": args.a, "p": args.p, "q": args.q, "p2": args.p2, "q2": args.q2 })
        }
        Identity::Diagonalization => {
            let f = power_exp(&log_nodes(1e-7, 60.0, 300), args.p, args.q)?;
            let padded = padded(&taus);
            let lf = forward(&apply_L(&f, args.a)?, args.a, &padded, qc)?;
            let tf = forward(&f, args.a, &padded, qc)?;
            for (i, &t) in taus.iter().enumerate() {
                samples.push(sample(Some(t), -(t * t + args.a * args.a) * tf.values[i], lf.values[i], tol, false));
            }
            serde_json::json!({ "a": args.a, "p": args.p, "q": args.q })
        }
    };
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let pass = samples.iter().all(|s| s.pass);
    let report = Report { identity: id, tolerance: tol, parameters, samples, max_residual, pass };
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::usage(e.to_string()))? + "\n";
    match &args.output {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
            println!("{id:?}: max residual {max_residual:.3e}, tolerance {tol:e}, {}", if pass { "pass" } else { "FAIL" });
        }
        None => print!("{text}"),
    }
    Ok(pass)
}

/// Transform results need two nodes; a lone tau gets a dummy neighbour.
fn padded(taus: &[f64]) -> Vec<f64> {
    if taus.len() == 1 {
        vec![taus[0], taus[0] + 1.0]
    } else {
        taus.to_vec()
    }
}
