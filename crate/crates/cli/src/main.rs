//! `polyiter` command line: solve, estimate, render and compare.
//!
//! Exit codes: 0 success, 1 non-convergence or failed conditions, 2 usage or parse error, 3 I/O error.
//! `POLYITER_THREADS` sets the rendering thread count.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    /// The computation ran but did not produce a result (non-convergence,
    /// violated conditions).
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polyiter", version, about = "Newton-type iteration schemes and polynomiographs")]
struct Cli {
    /// `key = value` file; flags take precedence over its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the three-stage iteration on a real interval with condition checks
    Solve(SolveArgs),
    /// Print the error-estimate factors for an interval or for given m, M
    Estimate(EstimateArgs),
    /// Render a polynomiograph to a binary PPM
    Render(RenderArgs),
    /// Render with several schemes and tabulate iteration statistics
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Polynomial expression, e.g. "x^2 - 2"
    #[arg(long = "f")]
    pub f: Option<String>,
    /// Variable letter used in the expression
    #[arg(long, default_value_t = 'x')]
    pub var: char,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Stop once |x_n - x_n+1| falls below this
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Starting point; defaults to the interval midpoint
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long = "f")]
    pub f: Option<String>,
    #[arg(long, default_value_t = 'x')]
    pub var: char,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    /// m = min |f'| (instead of --f/--interval)
    #[arg(long)]
    pub min_slope: Option<f64>,
    /// M = max |f'|
    #[arg(long)]
    pub max_slope: Option<f64>,
    /// M2 = max |f''|
    #[arg(long)]
    pub max_curvature: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct GridArgs {
    /// Polynomial expression in z, e.g. "z^3 - 1"
    #[arg(long = "p")]
    pub p: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Iteration cap
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["W", "H"])]
    pub size: Option<Vec<usize>>,
    #[arg(long, num_args = 4, value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"], allow_negative_numbers = true)]
    pub window: Option<Vec<f64>>,
    /// Stop on |p(z)| < eps instead of |z_n+1 - z_n| < eps
    #[arg(long)]
    pub residual: bool,
    /// Weights used when a scheme is named without parameters
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Evaluate pixels on one thread
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// newton, picard_mann:a, three_step:g,b,a, kadioglu:a,b, s:a,b, chain:t1,..., sen:M
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a `row col root iterations` text dump
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Schemes to compare
    pub schemes: Vec<String>,
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("POLYITER_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Usage(format!("POLYITER_THREADS must be a positive integer, got '{v}'")))?;
        if n > 0 {
            // ignore a pool that is already set up
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| {
        let file = config::ConfigFile::load(cli.config.as_deref())?;
        let mut out = std::io::stdout().lock();
        match cli.command {
            Command::Solve(args) => commands::solve(&args, &file, &mut out),
            Command::Estimate(args) => commands::estimate(&args, &file, &mut out),
            Command::Render(args) => commands::render(&args, &file, &mut out),
            Command::Compare(args) => commands::compare(&args, &file, &mut out),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
