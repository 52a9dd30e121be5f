//! The `shuffled-dp` command line: parameter accounting, Monte-Carlo
//! simulation and privacy verification.
//!
//! Exit codes: 0 on success or a passing check, 1 when a verification fails,
//! 2 on usage errors and infeasible budgets.

mod params;
mod simulate;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use params::{cmd_params, ParamsReport};
pub use simulate::{cmd_simulate, simulate, write_csv, ExperimentConfig, SimulationSummary};
pub use verify::{cmd_verify, EquivalenceReport, VerifyMode, EQUIVALENCE_LEVEL};

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "SHUFFLED_DP_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum App {
    Bitsum,
    Realsum,
    Histogram,
    Selection,
}

impl App {
    pub fn name(&self) -> &'static str {
        match self {
            App::Bitsum => "bitsum",
            App::Realsum => "realsum",
            App::Histogram => "histogram",
            App::Selection => "selection",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "shuffled-dp",
    version,
    about = "Differential privacy in the shuffled model"
)]
pub struct Cli {
    /// Worker threads (defaults to $SHUFFLED_DP_THREADS, then all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print protocol parameters and theoretical bounds for a budget.
    Params(ParamsArgs),
    /// Run repeated protocol executions and report their errors.
    Simulate(SimulateArgs),
    /// Check a privacy claim exactly or statistically.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum, default_value = "bitsum")]
    pub app: App,
    /// Failure probability for the accuracy bounds.
    #[arg(long, default_value_t = 0.05)]
    pub beta: f64,
    /// Messages per user for realsum (default ceil(eps sqrt(n))).
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Number of columns for selection.
    #[arg(long, default_value_t = 16)]
    pub d: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Default)]
pub struct SimulateArgs {
    /// JSON file with an `ExperimentConfig`; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub app: Option<App>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the noise level instead of deriving it from the budget.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Override the number of realsum rounds.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Histogram domain size.
    #[arg(long)]
    pub domain: Option<usize>,
    /// Selection column count.
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of ones in the bitsum dataset (default n/2).
    #[arg(long)]
    pub ones: Option<usize>,
    /// Selection planted margin (default n/5).
    #[arg(long)]
    pub margin: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// CSV file for per-trial records.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the summary JSON to this file.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Record per-trial wall-clock time (makes the CSV non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub mode: VerifyMode,
    #[arg(long)]
    pub n: usize,
    /// Required by the shuffled and local modes.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Required by the shuffled mode.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Noise level. Defaults to the smallest certified value for the budget,
    /// or `n/2` in equivalence mode.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Number of ones for the equivalence test (default n/3).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest n accepted by the exact shuffled check.
    #[arg(long, default_value_t = crate::oracle::DEFAULT_EXACT_LIMIT)]
    pub max_n: usize,
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to stderr. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // Only the first configuration in a process takes effect.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let result = match &cli.command {
        Command::Params(a) => cmd_params(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Formats a float with 17 significant digits, independent of locale.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}
