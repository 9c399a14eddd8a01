//! `iwt`: evaluation, verification, transform, convolution and equation
//! solving from the command line. Exit codes: 0 success, 1 a `verify`
//! identity out of tolerance, 2 usage or input errors, 3 numerical failures.

mod commands;
mod config;
mod fail;
mod parse;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{GridSpec, OutputFormat, RunConfig};
use crate::fail::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "iwt", version, about = "Index Whittaker transform toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long, global = true)]
    show_config: bool,
    /// Relative tolerance of the quadrature engines.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output nodes as lo:hi:count (log-spaced).
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Format of tables printed to standard output.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Repeat for progress and timing on standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a special function at real arguments.
    Eval(commands::EvalArgs),
    /// Evaluate the product-formula kernels k_alpha(x, y, xi) or q_a(x, y, xi).
    Kernel(commands::KernelArgs),
    /// Generalized translation (T^y f)(x) of a tabulated function.
    Translate(commands::TranslateArgs),
    /// Generalized convolution of two tabulated functions.
    Convolve(commands::ConvolveArgs),
    /// Forward index transform of a tabulated function.
    Transform(commands::TransformArgs),
    /// Inverse index transform of a tabulated transform.
    Inverse(commands::InverseArgs),
    /// Solve a convolution integral equation f + f * theta = h.
    Solve(commands::SolveArgs),
    /// Check a registered identity and write a JSON report.
    Verify(verify::VerifyArgs),
}

fn effective_config(g: &GlobalArgs) -> CliResult<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(t) = g.tol {
        cfg.quadrature.rel_tol = t;
    }
    if let Some(s) = &g.grid {
        cfg.grid = GridSpec::parse(s)?;
    }
    if let Some(f) = g.format {
        cfg.output = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    cfg.verbosity = cfg.verbosity.max(g.verbose);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> CliResult<bool> {
    let cfg = effective_config(&cli.global)?;
    if cli.global.show_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
        return Ok(true);
    }
    let Some(command) = cli.command else {
        return Err(CliError::usage("no subcommand given; see --help"));
    };
    match command {
        Command::Eval(a) => commands::eval(&a, &cfg),
        Command::Kernel(a) => commands::kernel(&a, &cfg),
        Command::Translate(a) => commands::translate(&a, &cfg),
        Command::Convolve(a) => commands::convolve(&a, &cfg),
        Command::Transform(a) => commands::transform(&a, &cfg),
        Command::Inverse(a) => commands::inverse(&a, &cfg),
        Command::Solve(a) => commands::solve(&a, &cfg),
        Command::Verify(a) => return verify::run(&a, &cfg),
    }?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("iwt: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
