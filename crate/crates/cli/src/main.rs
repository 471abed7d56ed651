//! `ternary-qec`: batch front end for the five-qutrit code toolkit.
//!
//! Exit codes: 0 when every executed check passed, 1 when a check failed or
//! an internal error occurred, 2 for usage errors.

mod codewords;
mod decompose;
mod simulate;
mod syndrome_table;
mod verify;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ternary-qec", version, about = "Verification toolkit for the five-qutrit stabilizer code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the code-level checks and print a sectioned report.
    VerifyCode {
        #[arg(long)]
        json: bool,
        /// Replace S2 with a Pauli that fails to commute with S1 (negative control).
        #[arg(long)]
        corrupt_s2: bool,
    },
    /// Print all 41 single-error syndromes.
    SyndromeTable {
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Expand a 3x3 matrix in the sigma or Pauli basis.
    Decompose {
        /// Matrix file in the JSON interchange format.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        basis: Basis,
        #[arg(long)]
        json: bool,
    },
    /// Export codewords and compare them with the canonical basis.
    Codewords {
        #[arg(long, value_enum, default_value_t = Source::Derived)]
        source: Source,
        /// Also write the codewords in the ket file format to this path.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of the logical failure rate.
    Simulate {
        /// Per-qutrit error probability.
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, env = "TERNARY_QEC_SEED", default_value_t = 42)]
        seed: u64,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Sigma,
    Pauli,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Derived,
    Paper,
}

/// Bad input supplied by the caller; maps to exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// `Ok(true)` when every check passed.
type Outcome = anyhow::Result<bool>;

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::VerifyCode { json, corrupt_s2 } => verify::run(json, corrupt_s2),
        Command::SyndromeTable { format } => syndrome_table::run(format),
        Command::Decompose { input, basis, json } => decompose::run(&input, basis, json),
        Command::Codewords { source, output, json } => codewords::run(source, output.as_deref(), json),
        Command::Simulate {
            p,
            trials,
            seed,
            workers,
            json,
            csv,
        } => simulate::run(p, trials, seed, workers, json, csv),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
