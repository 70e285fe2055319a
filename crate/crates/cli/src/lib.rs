//! Command-line front end for the `qttdft` crate.
//!
//! ```text
//! qttdft build  --n 16 --rank 12 --out f.mpo.json
//! qttdft apply  --mpo f.mpo.json --input v.json --out w.json --tol 1e-10
//! qttdft verify --mode entrywise --n 8 --rank 8
//! qttdft table  --n 8 --ranks 4:16:4 --format csv
//! ```
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 for usage
//! errors.

pub mod apply;
pub mod build;
pub mod format;
pub mod report;
pub mod table;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qttdft",
    version,
    about = "Closed-form MPOs of the discrete Fourier transform"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a transform MPO and optionally write it to a file.
    Build(BuildArgs),
    /// Apply a stored MPO to a vector file.
    Apply(ApplyArgs),
    /// Check a construction against its oracle and print a JSON report.
    Verify(VerifyArgs),
    /// Sweep the bond dimension and print an error table.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Number of sites.
    #[arg(long)]
    pub n: usize,
    /// Chebyshev degree K; the bond dimension is K + 1.
    #[arg(long, conflicts_with = "aqft_b", required_unless_present = "aqft_b")]
    pub rank: Option<usize>,
    /// Build the approximate QFT at this level instead.
    #[arg(long)]
    pub aqft_b: Option<usize>,
    /// Local dimension d.
    #[arg(long, default_value_t = 2)]
    pub qudit: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub mpo: PathBuf,
    /// A `qtt-vec-v1` or `qtt-mps-v1` file, least significant digit first.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Relative rounding tolerance for the result; 0 keeps the exact product.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Scale the result by `d^{-n/2}`, giving the unitary transform.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Entrywise,
    Unfolding,
    AqftExact,
    AqftError,
    Blocks,
    Interp,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long)]
    pub n: Option<usize>,
    /// Chebyshev degree K.
    #[arg(long)]
    pub rank: Option<usize>,
    /// AQFT level.
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub qudit: usize,
    /// Random (σ, τ) pairs instead of an exhaustive sweep.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Block level for `blocks`; every level when omitted.
    #[arg(long)]
    pub level: Option<usize>,
    /// Probe points per axis for `interp`.
    #[arg(long, default_value_t = 513)]
    pub probes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,
    /// Inclusive range `A:B:STEP` of K (or of b with `--aqft`).
    #[arg(long)]
    pub ranks: String,
    #[arg(long)]
    pub aqft: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

/// Runs a parsed command; `echo` is the command line recorded in reports.
pub fn run(cli: Cli, echo: &str, out: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Build(a) => build::run(&a, out),
        Command::Apply(a) => apply::run(&a, out),
        Command::Verify(a) => verify::run(&a, echo, out),
        Command::Table(a) => table::run(&a, out),
    }
}
