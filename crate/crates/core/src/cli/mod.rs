//! Command-line front end.
//!
//! Every subcommand builds a serializable report, renders it as a table,
//! JSON or CSV, and maps the outcome to an exit status: 0 on success, 1
//! when an asserted check fails, 2 on input errors.

mod commands;
mod render;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::cost::{CostError, PairingError};
use crate::metrics::MetricsError;
use crate::optimizer::{OptimizeError, MAX_BRUTE_FORCE_N};
use crate::predictions::PredictionError;
use crate::tree::{ConlluError, TreeError, Unit};

pub use commands::{run_analyze, run_casestudy, run_optimize, run_pair, run_predict, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "deplen",
    version,
    about = "Dependency length and online memory cost analysis"
)]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Length unit (default: words; chars for casestudy)
    #[arg(long, value_enum, global = true)]
    pub unit: Option<UnitArg>,
    /// Cost function: identity, power:ALPHA, log or table:PATH
    #[arg(long = "g", value_name = "SPEC", default_value = "identity", global = true)]
    pub g: String,
    /// Largest sentence solved by exhaustive search
    #[arg(long, value_name = "N", default_value_t = MAX_BRUTE_FORCE_N, global = true)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Worker threads (0 = one per core)
    #[arg(long, value_name = "K", default_value_t = 0, global = true)]
    pub jobs: usize,
    #[arg(long, value_name = "S", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Accept table cost functions that are not strictly increasing
    #[arg(long, global = true)]
    pub allow_nonmonotone_g: bool,
    /// Also write the JSON report to this file
    #[arg(long, value_name = "PATH", global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Per-sentence dependency lengths and cost, plus the corpus histogram
    Analyze(InputArgs),
    /// Compare each sentence with its minimum linear arrangement
    Optimize(InputArgs),
    /// Check the word-order placement predictions
    Predict,
    /// Pair length proportions with costs
    Pair(PairArgs),
    /// Character-length comparison of the French fixtures
    Casestudy,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CoNLL-U file
    pub input: PathBuf,
    /// Remove punctuation tokens (each must be a leaf)
    #[arg(long)]
    pub drop_punct: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// Proportions, comma separated (default: the 3-element demo)
    #[arg(long, value_name = "LIST", requires = "costs")]
    pub p: Option<String>,
    /// Cost values, comma separated
    #[arg(long, value_name = "LIST", requires = "p")]
    pub costs: Option<String>,
    /// Number of random instances checked against exhaustive search
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Words,
    Chars,
}

impl From<UnitArg> for Unit {
    fn from(u: UnitArg) -> Unit {
        match u {
            UnitArg::Words => Unit::Words,
            UnitArg::Chars => Unit::Characters,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Conllu { path: String, source: ConlluError },
    #[error("{path}: sentence {sentence}: {source}")]
    Tree {
        path: String,
        sentence: usize,
        source: TreeError,
    },
    #[error("{path}: sentence {sentence}: {source}")]
    Sentence {
        path: String,
        sentence: usize,
        source: OptimizeError,
    },
    #[error("{0}: no sentences with dependencies")]
    EmptyCorpus(String),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Prediction(#[from] PredictionError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("{0}")]
    Usage(String),
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exit {}\n{}{}", self.status, self.stdout, self.stderr)
    }
}

/// Parse arguments and run, capturing output instead of printing it.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    status: EXIT_INPUT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    status: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    let result = thread_pool(cli.options.jobs).and_then(|pool| pool.install(|| execute(cli)));
    match result {
        Ok(report) => Outcome {
            status: report.status,
            stdout: report.rendered,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            status: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let options = &cli.options;
    let report = match &cli.command {
        Command::Analyze(input) => run_analyze(options, input)?,
        Command::Optimize(input) => run_optimize(options, input)?,
        Command::Predict => run_predict(options)?,
        Command::Pair(args) => run_pair(options, args)?,
        Command::Casestudy => run_casestudy(options)?,
    };
    if let Some(path) = &options.report {
        std::fs::write(path, &report.json).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(report)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let outcome = run_args(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    outcome.status
}
