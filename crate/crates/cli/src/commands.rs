use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use iwt_core::convolve::{self as conv, norm_p, TranslationRequest};
use iwt_core::grid::{DecayClass, GridFunction};
use iwt_core::inteq::{self, EquationSpec, Theta};
use iwt_core::kernels::{kernel_k, kernel_q};
use iwt_core::specfun::{bessel_k, gamma, kummer_psi, parabolic_d, whittaker_w, SpecValue};
use iwt_core::transform::{self, tau_grid};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, RunConfig};
use crate::fail::{CliError, CliResult};
use crate::parse;

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes to `path`, or to standard output when absent.
fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Summary lines go to standard output unless the data itself does.
fn summary(output: Option<&Path>, line: &str) {
    if output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn progress(cfg: &RunConfig, start: Instant, what: &str) {
    if cfg.verbosity > 0 {
        eprintln!("{what} in {:.2} s", start.elapsed().as_secs_f64());
    }
}

#[derive(Serialize)]
struct Row {
    arg: String,
    re: f64,
    im: f64,
    error_estimate: f64,
    accurate: bool,
}

fn print_rows(rows: &[Row], format: OutputFormat) -> CliResult<()> {
    emit(None, |w| {
        match format {
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *w, rows).map_err(|e| CliError::usage(e.to_string()))?;
                writeln!(w)?;
            }
            OutputFormat::Csv => {
                writeln!(w, "arg,re,im,error_estimate,accurate")?;
                for r in rows {
                    writeln!(w, "{},{},{},{},{}", r.arg, fmt17(r.re), fmt17(r.im), fmt17(r.error_estimate), r.accurate)?;
                }
            }
        }
        Ok(())
    })
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
pub enum Function {
    /// Gamma(z); arguments may be complex.
    Gamma,
    /// Psi(a, b; x), the confluent function of the second kind.
    Psi,
    /// W_{alpha, nu}(x).
    WhittakerW,
    /// D_mu(x).
    ParabolicD,
    /// K_nu(x).
    BesselK,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[arg(value_enum)]
    function: Function,
    /// Arguments (real; complex for gamma).
    #[arg(required = true)]
    args: Vec<String>,
    #[arg(long = "a")]
    a: Option<String>,
    #[arg(long = "b")]
    b: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    mu: Option<String>,
}

fn param(v: &Option<String>, name: &str, function: Function) -> CliResult<Complex64> {
    match v {
        Some(s) => parse::complex(s),
        None => Err(CliError::usage(format!("{function:?} needs --{name}"))),
    }
}

fn real_arg(s: &str) -> CliResult<f64> {
    s.trim().parse().map_err(|_| CliError::usage(format!("argument '{s}' is not a real number")))
}

pub fn eval(args: &EvalArgs, cfg: &RunConfig) -> CliResult<()> {
    let f = args.function;
    let allowed: &[&str] = match f {
        Function::Gamma => &[],
        Function::Psi => &["a", "b"],
        Function::WhittakerW => &["alpha", "nu"],
        Function::ParabolicD => &["mu"],
        Function::BesselK => &["nu"],
    };
    let given = [("a", &args.a), ("b", &args.b), ("alpha", &args.alpha), ("nu", &args.nu), ("mu", &args.mu)];
    if let Some((name, _)) = given.iter().find(|(n, v)| v.is_some() && !allowed.contains(n)) {
        return Err(CliError::usage(format!("{f:?} does not take --{name}")));
    }
    let mut rows = Vec::with_capacity(args.args.len());
    for s in &args.args {
        let v: SpecValue = match f {
            Function::Gamma => SpecValue { value: gamma(parse::complex(s)?)?, error_estimate: 0.0, accurate: true },
            Function::Psi => kummer_psi(param(&args.a, "a", f)?, param(&args.b, "b", f)?, real_arg(s)?)?,
            Function::WhittakerW => whittaker_w(param(&args.alpha, "alpha", f)?, param(&args.nu, "nu", f)?, real_arg(s)?)?,
            Function::ParabolicD => parabolic_d(param(&args.mu, "mu", f)?, real_arg(s)?)?,
            Function::BesselK => bessel_k(param(&args.nu, "nu", f)?, real_arg(s)?)?,
        };
        rows.push(Row { arg: s.trim().to_string(), re: v.value.re, im: v.value.im, error_estimate: v.error_estimate, accurate: v.accurate });
    }
    print_rows(&rows, cfg.output)
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum KernelKind {
    /// k_alpha(x, y, xi) of the Whittaker product formula.
    K,
    /// q_a(x, y, xi) of the generalized translation.
    Q,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct KernelArgs {
    #[arg(value_enum)]
    kind: KernelKind,
    /// Values of xi.
    #[arg(required = true)]
    xi: Vec<f64>,
    #[arg(long, required = true)]
    x: f64,
    #[arg(long, required = true)]
    y: f64,
    /// alpha for k (complex allowed).
    #[arg(long)]
    alpha: Option<String>,
    /// a for q.
    #[arg(long = "a")]
    a: Option<f64>,
}

pub fn kernel(args: &KernelArgs, cfg: &RunConfig) -> CliResult<()> {
    let mut rows = Vec::with_capacity(args.xi.len());
    for &xi in &args.xi {
        let v = match args.kind {
            KernelKind::K => {
                let alpha = args.alpha.as_deref().ok_or_else(|| CliError::usage("kernel k needs --alpha"))?;
                kernel_k(parse::complex(alpha)?, args.x, args.y, xi)?
            }
            KernelKind::Q => {
                let a = args.a.ok_or_else(|| CliError::usage("kernel q needs --a"))?;
                Complex64::new(kernel_q(a, args.x, args.y, xi)?, 0.0)
            }
        };
        rows.push(Row { arg: fmt17(xi), re: v.re, im: v.im, error_estimate: 0.0, accurate: true });
    }
    print_rows(&rows, cfg.output)
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct TranslateArgs {
    #[arg(long = "a")]
    a: f64,
    #[arg(long)]
    y: f64,
    /// CSV with columns x,re[,im].
    #[arg(long)]
    input: PathBuf,
    /// Behaviour beyond the nodes: p0,pinf,rate.
    #[arg(long, value_parser = parse::decay)]
    decay: DecayClass,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn write_grid(f: &GridFunction, output: Option<&Path>) -> CliResult<()> {
    emit(output, |w| f.write_csv(w).map_err(CliError::from))
}

fn describe(f: &GridFunction, a: f64, output: Option<&Path>) {
    let sup = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut line = format!("nodes {}, sup {}", f.len(), fmt17(sup));
    for p in [1.0, 2.0] {
        if let Ok(n) = norm_p(f, a, p) {
            line.push_str(&format!(", L{p}-norm {}", fmt17(n)));
        }
    }
    summary(output, &line);
}

pub fn translate(args: &TranslateArgs, cfg: &RunConfig) -> CliResult<()> {
    let f = parse::read_grid(&args.input, args.decay)?;
    let start = Instant::now();
    let req = TranslationRequest { f, a: args.a, y: args.y, nodes: cfg.grid.nodes() };
    let t = conv::translate(&req, &cfg.quadrature)?;
    progress(cfg, start, "translation");
    write_grid(&t, args.output.as_deref())?;
    describe(&t, args.a, args.output.as_deref());
    Ok(())
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ConvolveArgs {
    #[arg(long = "a")]
    a: f64,
    f: PathBuf,
    g: PathBuf,
    #[arg(long, value_parser = parse::decay)]
    decay_f: DecayClass,
    #[arg(long, value_parser = parse::decay)]
    decay_g: DecayClass,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn convolve(args: &ConvolveArgs, cfg: &RunConfig) -> CliResult<()> {
    let f = parse::read_grid(&args.f, args.decay_f)?;
    let g = parse::read_grid(&args.g, args.decay_g)?;
    let start = Instant::now();
    let h = conv::convolve(&f, &g, args.a, &cfg.grid.nodes(), &cfg.quadrature)?;
    progress(cfg, start, "convolution");
    write_grid(&h, args.output.as_deref())?;
    describe(&h, args.a, args.output.as_deref());
    Ok(())
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct TransformArgs {
    #[arg(long = "a")]
    a: f64,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse::decay)]
    decay: DecayClass,
    /// lo:step:hi; defaults to tau_points nodes up to the index cutoff.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn transform(args: &TransformArgs, cfg: &RunConfig) -> CliResult<()> {
    let f = parse::read_grid(&args.input, args.decay)?;
    let taus = match &args.tau {
        Some(s) => parse::tau_range(s)?,
        None => tau_grid(args.a, cfg.tau_points, &cfg.quadrature),
    };
    let start = Instant::now();
    // a single tau still needs a second node for the result type
    let padded = if taus.len() == 1 { vec![taus[0], taus[0] + 1.0] } else { taus.clone() };
    let mut phi = transform::forward(&f, args.a, &padded, &cfg.quadrature)?;
    if taus.len() == 1 {
        phi.tau_nodes.truncate(1);
        phi.values.truncate(1);
        phi.density.truncate(1);
    }
    progress(cfg, start, "forward transform");
    emit(args.output.as_deref(), |w| phi.write_csv(w).map_err(CliError::from))?;
    let mut line = format!("tau nodes {}", phi.tau_nodes.len());
    if phi.tau_nodes.len() > 1 {
        line.push_str(&format!(", spectral norm^2 {}", fmt17(phi.spectral_norm_sq())));
    }
    if let Ok(n) = norm_p(&f, args.a, 2.0) {
        line.push_str(&format!(", L2-norm^2 {}", fmt17(n * n)));
    }
    summary(args.output.as_deref(), &line);
    Ok(())
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct InverseArgs {
    #[arg(long = "a")]
    a: f64,
    /// CSV with columns tau,re,im[,rho].
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn inverse(args: &InverseArgs, cfg: &RunConfig) -> CliResult<()> {
    let phi = parse::read_transform(&args.input, args.a)?;
    let start = Instant::now();
    let f = transform::inverse(&phi, &cfg.grid.nodes(), &cfg.quadrature)?;
    progress(cfg, start, "inverse transform");
    write_grid(&f, args.output.as_deref())?;
    describe(&f, args.a, args.output.as_deref());
    Ok(())
}

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Num {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Num> for Complex64 {
    fn from(n: Num) -> Self {
        match n {
            Num::Real(r) => Complex64::new(r, 0.0),
            Num::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ThetaFile {
    Lebedev { n: u32 },
    Power { lambda: Num, beta: Num },
    Grid { csv: PathBuf, decay: [f64; 3] },
}

/// Equation file: `{a, nu, theta: {kind, ...}, h, h_decay}`; relative paths
/// are resolved against the file's directory.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationFile {
    a: Option<f64>,
    #[serde(default)]
    nu: f64,
    theta: ThetaFile,
    h: PathBuf,
    h_decay: [f64; 3],
}

fn load_equation(path: &Path) -> CliResult<EquationSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let file: EquationFile = serde_json::from_str(&text).map_err(|e| CliError::json(path, &e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let decay = |d: [f64; 3]| DecayClass::new(d[0], d[1], d[2]);
    let h = parse::read_grid(&dir.join(&file.h), decay(file.h_decay))?;
    let (theta, default_a) = match file.theta {
        ThetaFile::Lebedev { n } => (Theta::Lebedev { n }, Some(n as f64 + 0.5)),
        ThetaFile::Power { lambda, beta } => (Theta::PowerKernel { lambda: lambda.into(), beta: beta.into() }, None),
        ThetaFile::Grid { csv, decay: d } => (Theta::Grid(parse::read_grid(&dir.join(csv), decay(d))?), None),
    };
    let a = file
        .a
        .or(default_a)
        .ok_or_else(|| CliError::usage(format!("{}: field 'a' is required for this kernel", path.display())))?;
    Ok(EquationSpec::new(a, file.nu, theta, h)?)
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Equation file (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Solution CSV; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report JSON; defaults to the output path with extension .report.json.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Use the direct Nystrom discretization instead of the transform path.
    #[arg(long)]
    nystrom: bool,
}

#[derive(Serialize)]
struct SolveReport {
    method: &'static str,
    solvability: inteq::SolvabilityReport,
    h_sup: f64,
    solution_sup: f64,
    residual_sup: f64,
    residual_relative: f64,
}

pub fn solve(args: &SolveArgs, cfg: &RunConfig) -> CliResult<()> {
    let spec = load_equation(&args.spec)?;
    let nodes = cfg.grid.nodes();
    let start = Instant::now();
    let (method, f, solvability, residual_sup) = if args.nystrom {
        let report = inteq::check_solvability(&spec, &cfg.quadrature, &cfg.solver)?;
        let f = inteq::nystrom_solve(&spec, &nodes, &cfg.quadrature, &cfg.solver)?;
        let r = inteq::residual(&spec, &f, &cfg.quadrature)?;
        let sup = r.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        ("nystrom", f, report, sup)
    } else {
        let s = inteq::solve(&spec, &nodes, &cfg.quadrature, &cfg.solver)?;
        ("transform", s.f, s.report, s.residual_sup)
    };
    progress(cfg, start, "solve");
    let sup = |g: &GridFunction| g.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let h_sup = sup(&spec.h);
    let report = SolveReport {
        method,
        solvability,
        h_sup,
        solution_sup: sup(&f),
        residual_sup,
        residual_relative: residual_sup / h_sup,
    };
    write_grid(&f, args.output.as_deref())?;
    let report_path = args.report.clone().or_else(|| args.output.as_ref().map(|p| p.with_extension("report.json")));
    if let Some(p) = &report_path {
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::usage(e.to_string()))?;
        std::fs::write(p, text + "\n").map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
    }
    summary(
        args.output.as_deref(),
        &format!(
            "{method}: min |1 + transform of theta| {} at tau {}, residual sup {} ({} of sup |h|)",
            fmt17(report.solvability.min_abs),
            report.solvability.argmin_tau,
            fmt17(residual_sup),
            fmt17(report.residual_relative)
        ),
    );
    Ok(())
}
