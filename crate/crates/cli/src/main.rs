//! `qtexture`: texture measures, witnesses and property verification from
//! the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qtexture::harness::SuiteConfig;

mod commands;
mod parse;

/// Environment variable holding the default seed for `gen` and `verify`.
pub const SEED_ENV: &str = "QTEXTURE_SEED";

#[derive(Parser)]
#[command(name = "qtexture", version, about = "Quantum-state texture measures, witnesses and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OutFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteChoice {
    Axioms,
    Propositions,
    Witnesses,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate texture measures on a density-matrix file.
    Measure {
        /// Density-matrix JSON file.
        state: PathBuf,
        /// tGR:alpha=A,z=Z | tSR | tF | tTr | tW | tR:alpha=A | tB | tTs:mu=M.
        /// Repeatable; all measures at default parameters when omitted.
        #[arg(short, long = "measure", value_name = "ID[:PARAMS]")]
        measures: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        out: OutFormat,
    },
    /// Evaluate a witness on a density-matrix file.
    ///
    /// SPEC is w1 | generator | theta:θ | jk:j,k,φ | imag:j,k,± | universal:FILE.
    /// Indices are 0-based; angles are in radians.
    Witness {
        spec: String,
        state: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        out: OutFormat,
    },
    /// Write a random state, free channel, f1-fixing unitary or witness file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, env = SEED_ENV, default_value_t = 42, global = true)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Run the property suites and write a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteChoice,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
        /// Inequality slack.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Report file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum GenKind {
    /// Random density matrix (Ginibre of the given rank, or Haar pure).
    State {
        #[arg(long)]
        dim: usize,
        #[arg(long, conflicts_with = "pure")]
        rank: Option<usize>,
        #[arg(long)]
        pure: bool,
    },
    /// Random texture-free channel: isometry with environment `--env`, or a
    /// mixture of `--terms` f1-fixing unitaries.
    Channel {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        env: usize,
        #[arg(long, conflicts_with = "env")]
        terms: Option<usize>,
    },
    /// Random unitary fixing f1.
    Unitary {
        #[arg(long)]
        dim: usize,
    },
    /// Witness operator as a hermitian file with its family and threshold.
    Witness {
        /// w1 | generator | theta:θ | jk:j,k,φ | imag:j,k,± | universal:FILE
        spec: String,
        #[arg(long)]
        dim: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Measure { state, measures, out } => commands::measure(&state, &measures, out)?,
        Command::Witness { spec, state, out } => commands::witness(&spec, &state, out)?,
        Command::Gen { kind, seed, out } => commands::gen(&kind, seed, out.as_deref())?,
        Command::Verify {
            suite,
            dims,
            samples,
            seed,
            tol,
            out,
        } => {
            let cfg = SuiteConfig {
                dims,
                samples_per_dim: samples,
                seed,
                tolerance: tol,
                ..SuiteConfig::default()
            };
            return commands::verify(&cfg, suite, out.as_deref());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
