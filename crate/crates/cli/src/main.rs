//! `esz`: exact cup, cap and convex-subset tools for planar point sets.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use esz_core::{Error, ErrorClass};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "esz", version, about = "Exact cups, caps, convex subsets and bounds for planar point sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Master seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cross-check detector results by exhaustive enumeration.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Largest input size for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = esz_core::chains::ORACLE_GUARD)]
    pub guard_size: usize,
}

#[derive(Subcommand)]
pub enum Command {
    /// Longest cup, longest cap and largest convex subset.
    Analyze { file: std::path::PathBuf },
    /// Upper/lower split with the extension check.
    Partition {
        file: std::path::PathBuf,
        /// Also run the recursive cup-or-cap search for these (n, m).
        #[arg(long, requires = "m")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        m: Option<usize>,
    },
    /// Find a good-point certificate and test it adversarially.
    Goodpoint {
        file: std::path::PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        l: usize,
        /// Polygon sizes n to certify against.
        #[arg(long, value_delimiter = ',', default_values_t = [5, 6])]
        n: Vec<usize>,
        /// Adversarial trials per n; 0 skips certification.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Projective reduction from a hull vertex, with correspondence checks.
    Transform {
        file: std::path::PathBuf,
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Generate certified point sets.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        /// Output path; with several sets, files `<out>-<i>.txt`.
        #[arg(long, global = true)]
        out: Option<std::path::PathBuf>,
    },
    /// Table of upper bounds with exact ratios.
    Bounds {
        /// Inclusive range `a..b`, or a single `n`.
        #[arg(long, default_value = "6..20")]
        n_range: String,
        #[arg(long)]
        csv: bool,
    },
    /// Run the acceptance criteria.
    Verify {
        /// Reduced sizes for a fast smoke run.
        #[arg(long)]
        quick: bool,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand, Clone)]
pub enum GenerateKind {
    /// Largest set with no n-cup and no m-cap.
    CupcapExtremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// 2^(n-2) points with no convex n-gon.
    EsLowerBound {
        #[arg(long)]
        n: usize,
    },
    /// Uniform points on an integer grid, in general position.
    Random {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = esz_core::constructions::GRID)]
        bbox: i64,
    },
    /// Random sets with no n-cup and no m-cap.
    RandomFree {
        #[arg(long)]
        n_cup: usize,
        #[arg(long)]
        m_cap: usize,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Sampler::Structured)]
        sampler: Sampler,
    },
}

#[derive(ValueEnum, Clone, Copy)]
pub enum Sampler {
    Uniform,
    Structured,
}

#[derive(Debug)]
pub enum CliError {
    Core { error: Error, message: String },
    Io(String),
    Usage(String),
    /// A cross-check between two independent computations disagreed.
    Invariant(String),
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        let message = error.to_string();
        CliError::Core { error, message }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 3,
            CliError::Core { error, .. } if error.class() == ErrorClass::Invariant => 3,
            _ => 2,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::Core { error, .. } => error.code(),
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
            CliError::Invariant(_) => "invariant_violation",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Core { message, .. } => message,
            CliError::Io(m) | CliError::Usage(m) | CliError::Invariant(m) => m,
        }
    }
}

/// Envelope around every command's results.
#[derive(Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub version: &'static str,
    pub input_digest: Option<String>,
    pub seed: u64,
    pub results: serde_json::Value,
    pub timing_ms: f64,
}

/// What a command produced: machine results plus a short human summary.
pub struct Outcome {
    pub digest: Option<String>,
    pub results: serde_json::Value,
    pub summary: String,
    /// Set when the command ran but a check failed (exit code 1).
    pub failed: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let global = cli.global.clone();
    match commands::run(cli) {
        Ok(outcome) => {
            if global.json {
                let report = Report {
                    command: std::env::args().skip(1).collect(),
                    version: env!("CARGO_PKG_VERSION"),
                    input_digest: outcome.digest,
                    seed: global.seed,
                    results: outcome.results,
                    timing_ms: start.elapsed().as_secs_f64() * 1e3,
                };
                emit(&format!("{}\n", serde_json::to_string_pretty(&report).expect("reports serialize")));
            } else {
                emit(&outcome.summary);
            }
            match outcome.failed {
                Some(why) => {
                    eprintln!("error[verification_failed]: {why}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            if global.json {
                let body = serde_json::json!({ "error": { "code": e.code(), "message": e.message() } });
                emit(&format!("{}\n", serde_json::to_string_pretty(&body).expect("errors serialize")));
            }
            eprintln!("error[{}]: {}", e.code(), e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Writes to stdout, ignoring a closed pipe (`esz ... | head`).
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}
