//! Command-line front end for MLTI system analysis.
//!
//! The binary `mlti` reads a system file (see [`format`]), runs one of the
//! `eig`, `analyze`, `simulate`, `gramian` or `steer` commands, and writes a
//! JSON or plain-text report. Exit status is 0 on success, 2 when an input
//! cannot be parsed or validated, and 3 when the numerics refuse (unstable
//! system for an infinite Gramian, unreachable target, singular operator).

pub mod commands;
pub mod error;
pub mod format;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::execute;
pub use error::{CliError, ErrorKind};
pub use format::{Encoding, SystemFile, TensorFile, TrajectoryFile};

#[derive(Debug, Clone, Parser)]
#[command(name = "mlti", version, about = "Analyze multilinear time-invariant systems")]
pub struct Cli {
    /// Base relative tolerance for rank, definiteness and inverse checks.
    #[arg(long, global = true, value_name = "VALUE")]
    pub tol: Option<f64>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Only validate array lengths against the declared shapes.
    #[arg(long, global = true)]
    pub layout_check: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Reach,
    Obs,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// U-eigenvalues of A, largest modulus first.
    Eig {
        system: PathBuf,
        /// Include the folded eigentensors.
        #[arg(long)]
        eigentensors: bool,
    },
    /// Stability, reachability and observability summary.
    Analyze { system: PathBuf },
    /// Run the state recursion and write the trajectory.
    Simulate(SimulateArgs),
    /// Finite- or infinite-horizon Gramian.
    Gramian(GramianArgs),
    /// Minimum-energy inputs steering x0 to x1.
    Steer(SteerArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    pub system: PathBuf,
    #[arg(long)]
    pub x0: PathBuf,
    #[arg(long, conflicts_with = "zero_input", required_unless_present = "zero_input")]
    pub inputs: Option<PathBuf>,
    #[arg(long)]
    pub zero_input: bool,
    #[arg(long)]
    pub steps: usize,
    /// Compare every state with the closed-form solution.
    #[arg(long)]
    pub verify_closed_form: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GramianArgs {
    pub system: PathBuf,
    #[arg(long, conflicts_with = "infinite", required_unless_present = "infinite")]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub infinite: bool,
    #[arg(long, value_enum, default_value_t = Which::Reach)]
    pub which: Which,
}

#[derive(Debug, Clone, Args)]
pub struct SteerArgs {
    pub system: PathBuf,
    #[arg(long)]
    pub x0: PathBuf,
    #[arg(long)]
    pub x1: PathBuf,
    #[arg(long)]
    pub horizon: usize,
    /// Write the input sequence here; otherwise it is embedded in the report.
    #[arg(long, value_name = "PATH")]
    pub inputs_out: Option<PathBuf>,
}
