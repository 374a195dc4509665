//! `protset`: protected points of semi-definite perturbations from the
//! command line.

mod commands;
mod error;
mod grid;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::grid::TGrid;

#[derive(Parser, Debug)]
#[command(name = "protset", version, about = "Protected points of A + tB for semi-definite B")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Locate and certify every protected point of (A, B).
    Analyze(AnalyzeArgs),
    /// Build a pair whose protected set is the given finite set.
    Realize(RealizeArgs),
    /// Write the eigenvalue branches of A + tB on a linear t-grid as CSV.
    Flow(FlowArgs),
    /// Cross-check every protection witness at a single λ.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Matrix document for A.
    pub a: PathBuf,
    /// Matrix document for B (positive semi-definite).
    pub b: PathBuf,
    /// Threshold on the relative protection residual.
    #[arg(long, allow_hyphen_values = true, default_value_t = protset_core::protection::DEFAULT_TOL)]
    pub tol: f64,
    /// Report destination.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    /// Prescribed protected points, comma separated.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Vec<f64>,
    /// Positive weights of the cyclic vector, comma separated (default uniform).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<f64>>,
    #[arg(long)]
    pub out_a: PathBuf,
    #[arg(long)]
    pub out_b: PathBuf,
    /// Recover the protected set from the written pair and compare.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct FlowArgs {
    pub a: PathBuf,
    /// Any symmetric matrix; semi-definiteness is not required here.
    pub b: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: f64,
    #[arg(long)]
    pub t_steps: usize,
    /// CSV destination.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    /// `lin:min:max:steps` or `log:min_exp:max_exp:per_decade[,symmetric]`.
    #[arg(long, default_value = "log:-2:6:25,symmetric")]
    pub t_grid: TGrid,
    #[arg(long, allow_hyphen_values = true, default_value_t = protset_core::protection::DEFAULT_TOL)]
    pub tol: f64,
    /// Distance at which the brute-force oracle counts a hit.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e-3)]
    pub hit_tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => commands::analyze(&args),
        Command::Realize(args) => commands::realize(&args),
        Command::Flow(args) => commands::flow(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
