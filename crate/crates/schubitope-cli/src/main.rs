//! Command-line surface: expand polynomials, re-verify the theorems at
//! desk scale, and reproduce the extremal and coefficient tables.
//!
//! Exit codes: 0 clean, 1 a theorem violation was found, 2 usage error,
//! 3 a resource cap was exceeded.

mod expand;
mod tables;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

/// Enumeration budget for support counting, overridable via the
/// `SCHUBITOPE_LEAF_CAP` environment variable.
pub fn leaf_cap() -> u64 {
    std::env::var("SCHUBITOPE_LEAF_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(schubitope::weylchar::DEFAULT_LEAF_CAP)
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "schubitope",
    version,
    about = "Schubert/key polynomial supports, witness algorithms, and desk-scale verification"
)]
struct Cli {
    /// Worker threads for the sweeps (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "tsv")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a Schubert or key polynomial and report ν and θ
    Expand {
        /// Permutation in one-line notation ("1432", or comma-separated
        /// for sizes above 9)
        #[arg(long, conflicts_with = "comp")]
        perm: Option<String>,
        /// Weak composition as comma-separated parts ("1,3,0,2")
        #[arg(long)]
        comp: Option<String>,
    },
    /// Re-run a theorem/proposition check; exits nonzero on violations
    Verify {
        /// One of: thm11, thm12, thm14, keyres, witness, macdonald, prop21
        scope: verify::Scope,
        /// Largest symmetric-group size to sweep (scope dependent default)
        #[arg(long)]
        n: Option<usize>,
        /// Grid size for exhaustive diagram sweeps (default 4)
        #[arg(long)]
        grid: Option<usize>,
        /// Number of random subjects for sampled scopes
        #[arg(long)]
        samples: Option<u64>,
        /// Seed for the sampled scopes
        #[arg(long, default_value_t = 20240915)]
        seed: u64,
        /// Allow the documented long-running ranges
        #[arg(long)]
        long: bool,
    },
    /// Reproduce a table: `alphabeta` (extremal values) or `cd`
    /// (expansion coefficients)
    Tables {
        /// Which table to produce
        which: tables::Which,
        /// Largest n for alphabeta rows (default 7)
        #[arg(long)]
        n: Option<usize>,
        /// Largest pattern size for cd rows (default 5)
        #[arg(long)]
        m: Option<usize>,
        /// Allow the documented long-running ranges (n ≥ 8, m ≥ 7)
        #[arg(long)]
        long: bool,
        /// Resumable state file for long alphabeta sweeps
        #[arg(long)]
        checkpoint: Option<std::path::PathBuf>,
    },
}

/// A usage problem (exit 2) or exceeded resource cap (exit 3).
pub enum CliError {
    Usage(String),
    Resource(String),
}

impl From<schubitope::Error> for CliError {
    fn from(e: schubitope::Error) -> Self {
        match e {
            schubitope::Error::LeafCapExceeded { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(workers) = cli.workers {
        if workers < 1 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .expect("worker pool is configured once at startup");
    }

    let outcome = match cli.command {
        Command::Expand { perm, comp } => expand::run(perm, comp, cli.format),
        Command::Verify {
            scope,
            n,
            grid,
            samples,
            seed,
            long,
        } => verify::run(scope, n, grid, samples, seed, long, cli.format),
        Command::Tables {
            which,
            n,
            m,
            long,
            checkpoint,
        } => tables::run(which, n, m, long, checkpoint.as_deref(), cli.format),
    };

    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}
