//! `sl3lab`: numerical checks for Legendre and zonal-spherical estimates,
//! Weyl-chamber zig-zag certificates and SL(3, Z/nZ) spectral gaps.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 bad configuration or
//! usage, 3 size limit exceeded, 4 eigensolver did not converge, 5 I/O error.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{Common, Format};
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("size limit: {0}")]
    SizeLimit(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::SizeLimit(_) => 3,
            CliError::NonConvergence(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sl3lab", version, about = "Numerical checks around SL(3) Poincare-type estimates")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format [default: csv].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Random seed (start vector, first synthetic seed) [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the eigensolver [default: all cores].
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML file with defaults; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Holder sup of Legendre differences and the Bernstein-type envelope.
    Legendre(LegendreArgs),
    /// Operator and Schatten norms of T_delta - T_0 on spheres.
    Tdelta(TdeltaArgs),
    /// Zig-zag chaining certificates in the positive Weyl chamber.
    Weyl(WeylArgs),
    /// Spectral gap of Cayley graphs of SL(3, Z/nZ).
    Cayley(CayleyArgs),
}

#[derive(Debug, Args)]
pub struct LegendreArgs {
    /// `start:stop:step` (inclusive) or a comma list [default: -1:1:0.02].
    #[arg(long, allow_hyphen_values = true)]
    pub delta_grid: Option<String>,
    /// Largest degree summed explicitly [default: 10000].
    #[arg(long)]
    pub n_cut: Option<usize>,
    /// Largest degree in the envelope check [default: 1000].
    #[arg(long)]
    pub bernstein_n: Option<usize>,
    /// Points in (-1, 1) for the envelope check [default: 2001].
    #[arg(long)]
    pub bernstein_points: Option<usize>,
    #[arg(long, hide = true)]
    pub fault_scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TdeltaArgs {
    /// Sphere dimension d >= 2 [default: 2].
    #[arg(long)]
    pub dim: Option<u32>,
    /// `start:stop:step` (inclusive) or a comma list [default: 0:0.5:0.01].
    #[arg(long, allow_hyphen_values = true)]
    pub delta_grid: Option<String>,
    /// Comma-separated Schatten exponents [default: 6,8,12].
    #[arg(long)]
    pub p_list: Option<String>,
    /// Largest degree summed explicitly [default: 20000].
    #[arg(long)]
    pub n_cut: Option<usize>,
    #[arg(long, hide = true)]
    pub fault_scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    /// Grid size per axis for endpoint pairs [default: 20].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of synthetic coefficient seeds, starting at --seed [default: 100].
    #[arg(long)]
    pub seeds: Option<u64>,
    /// Growth rate alpha in [0, 1/4) [default: 0].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Single endpoint pair `r,s,t;r,s,t` instead of the grid.
    #[arg(long, allow_hyphen_values = true)]
    pub pair: Option<String>,
}

#[derive(Debug, Args)]
pub struct CayleyArgs {
    /// Comma-separated moduli [default: 2,3].
    #[arg(long)]
    pub moduli: Option<String>,
    /// Refuse groups with more vertices than this [default: 2000000].
    #[arg(long)]
    pub max_vertices: Option<usize>,
    /// Eigen-residual tolerance [default: 1e-8].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Write the Laplacian as Matrix Market (suffixed -n<n> for several moduli).
    #[arg(long)]
    pub export_mtx: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let file = config::load(cli.config.as_deref())?;
    let common = Common {
        out: cli.out.or(file.out.clone()),
        format: cli.format.or(file.format).unwrap_or_default(),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        threads: cli.threads.or(file.threads),
    };
    if common.threads == Some(0) {
        return Err(CliError::Config("threads must be at least 1".into()));
    }
    match &cli.command {
        Command::Legendre(a) => commands::legendre::run(&common, a, &file.legendre),
        Command::Tdelta(a) => commands::tdelta::run(&common, a, &file.tdelta),
        Command::Weyl(a) => commands::weyl::run(&common, a, &file.weyl),
        Command::Cayley(a) => commands::cayley::run(&common, a, &file.cayley),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("sl3lab: checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("sl3lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
