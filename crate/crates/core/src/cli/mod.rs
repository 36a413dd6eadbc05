//! The `flatnorm` command line.
//!
//! Exit codes: 0 on success, 2 for bad input or arguments, 3 when a solver
//! fails.

mod commands;
mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use manifest::RunManifest;

use crate::error::Error;
use crate::mincut::Connectivity;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "flatnorm", version, about = "Flat norm decompositions of currents on cubical grids")]
pub struct Cli {
    /// Worker threads for sweeps and distance jobs (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Binary L1TV denoising of a PBM image by minimum cut.
    Denoise(DenoiseArgs),
    /// Flat norm of a FLATCHAIN file by the chain LP and/or its dual.
    Flatnorm(FlatnormArgs),
    /// Flat norm distance between two PBM shapes.
    Distance(DistanceArgs),
    /// Flat norm over a list of scales.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    pub image: PathBuf,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value = "4", value_parser = parse_connectivity)]
    pub connectivity: Connectivity,
    #[arg(long)]
    pub out: PathBuf,
    /// Pixels per grid cell in the rendering.
    #[arg(long, default_value_t = 4)]
    pub scale: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FlatnormMethod {
    Lp,
    Dual,
    Both,
}

#[derive(Debug, Args)]
pub struct FlatnormArgs {
    pub chain: PathBuf,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "lp")]
    pub method: FlatnormMethod,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub gap_tolerance: f64,
    /// Tolerance for active constraints in the slackness check and X set.
    #[arg(long, default_value_t = crate::dualform::SLACKNESS_TOL)]
    pub slackness_tolerance: f64,
    /// Also test whether the LP optimum is unique.
    #[arg(long)]
    pub probe_uniqueness: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeMethod {
    Mincut,
    Lp,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "mincut")]
    pub method: ShapeMethod,
    #[arg(long, default_value = "4", value_parser = parse_connectivity)]
    pub connectivity: Connectivity,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub scale: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// A PBM image or a FLATCHAIN file.
    pub input: PathBuf,
    /// Comma separated, strictly ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambdas: Vec<f64>,
    #[arg(long, value_enum, default_value = "lp")]
    pub method: ShapeMethod,
    #[arg(long, default_value = "4", value_parser = parse_connectivity)]
    pub connectivity: Connectivity,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub scale: usize,
}

fn parse_connectivity(s: &str) -> Result<Connectivity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USER } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(summary) => {
            print!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_user_error() {
        EXIT_USER
    } else {
        EXIT_SOLVER
    }
}

/// Runs a parsed command line and returns its report text.
pub fn run(cli: &Cli) -> crate::Result<String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Error::InvalidParameter("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {} worker threads: {e}", cli.jobs.unwrap_or(0))))?;
    pool.install(|| match &cli.command {
        Command::Denoise(a) => commands::denoise(a),
        Command::Flatnorm(a) => commands::flatnorm(a),
        Command::Distance(a) => commands::distance(a),
        Command::Sweep(a) => commands::sweep(a),
    })
}
