//! `dpsbp`: verify, analyse, design and run dual-pairing SBP operators.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dpsbp::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Parser, Debug)]
#[command(name = "dpsbp", version, about = "Dual-pairing SBP operators: verification, dispersion, design, simulation")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check SBP, upwind, accuracy and norm positivity; exit 1 on failure
    Verify(VerifyArgs),
    /// Dispersion curve, error report and refinement factors
    Dispersion(DispersionArgs),
    /// Design a DRP interior over an upwind family
    Optimize(OptimizeArgs),
    /// Solve for a boundary closure by ADMM
    CloseBoundary(CloseArgs),
    /// Run the first-order wave system
    Simulate(SimulateArgs),
    /// Regenerate the dispersion, phase-velocity and h*/SWM tables
    Tables(TablesArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// operator file or builtin name
    #[arg(long)]
    pub operator: String,
    /// grid size (default: the operator's minimum)
    #[arg(long)]
    pub n: Option<usize>,
    /// accepted range for min h, as LO,HI
    #[arg(long, default_value = "0.25,0.45")]
    pub h_range: String,
    #[arg(long, default_value_t = 5e-6)]
    pub sbp_tol: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub lambda_tol: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct DispersionArgs {
    #[arg(long)]
    pub operator: String,
    /// curve CSV: k, omega_N, eps_rel, envelope, v_p
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// refinement tolerances (repeatable)
    #[arg(long = "delta", default_values_t = [0.05, 0.025, 0.015])]
    pub deltas: Vec<f64>,
    /// also print the h* row in table form
    #[arg(long)]
    pub table: bool,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct OptimizeArgs {
    /// lowest upwind order in the family
    #[arg(long)]
    pub a: usize,
    /// highest upwind order in the family
    #[arg(long)]
    pub b: usize,
    /// uniform | expquad:C | indicator:K | cosine:c0,c1,...
    #[arg(long, default_value = "uniform")]
    pub weight: String,
    #[arg(long, default_value_t = dpsbp::optimizer::DEFAULT_J_MAX)]
    pub j_max: usize,
    /// write the interior as an operator file
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CloseArgs {
    /// operator file or builtin name supplying the interior
    #[arg(long)]
    pub operator: String,
    /// closure block size (default: max(reach, 2p + 2))
    #[arg(long)]
    pub s: Option<usize>,
    /// boundary accuracy order (default: half the interior order)
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub eps1: f64,
    #[arg(long, default_value_t = 0.25)]
    pub eps2: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub ridge: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    /// name stored in the output file
    #[arg(long)]
    pub name: Option<String>,
    /// closed operator file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// iteration log CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    /// operator file, builtin name, or dp6 (upwind order 6 closed by ADMM)
    #[arg(long)]
    pub operator: String,
    /// number of grid points
    #[arg(long, default_value_t = 257)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.5)]
    pub cfl: f64,
    #[arg(long, default_value_t = 16.0)]
    pub tend: f64,
    /// reflecting | periodic
    #[arg(long, default_value = "reflecting")]
    pub bc: String,
    #[arg(long, default_value_t = 0.0)]
    pub x_left: f64,
    #[arg(long, default_value_t = 8.0)]
    pub x_right: f64,
    #[arg(long, default_value_t = 4.0)]
    pub center: f64,
    #[arg(long, default_value_t = 0.5)]
    pub width: f64,
    /// carrier wavenumber times h (π is the π-mode)
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub carrier: f64,
    /// extra boundary dissipation on v
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    /// rows in the error series
    #[arg(long, default_value_t = 64)]
    pub outputs: usize,
    /// error series CSV: t, l1_rel, energy
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// snapshot times (repeatable)
    #[arg(long = "snapshot")]
    pub snapshots: Vec<f64>,
    /// snapshot CSV: x, v, sigma blocks
    #[arg(long)]
    pub snapshot_csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct TablesArgs {
    /// directory for l2.csv, phase_velocity.csv, hstar.csv
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Command::Verify(a) => commands::verify(&a),
        Command::Dispersion(a) => commands::dispersion(&a),
        Command::Optimize(a) => commands::optimize(&a),
        Command::CloseBoundary(a) => commands::close_boundary(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Tables(a) => commands::tables(&a),
    };
    match out {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
