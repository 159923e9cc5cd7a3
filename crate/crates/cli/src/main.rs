//! `kendall`: transform, invert, score, merge and simulate from the command line.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kendall_core::analysis::{Method, Mixture};
use kendall_core::LogBase;

use commands::{IntegrationArgs, Jitter};

#[derive(Debug, Parser)]
#[command(name = "kendall", version, about = "Kendall transformation of ordinal data")]
struct Cli {
    /// Logarithm base of reported information: e (nats) or 2 (bits)
    #[arg(long = "log-base", visible_alias = "base", global = true, default_value = "e")]
    log_base: LogBase,

    /// Seed for simulations
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transform an object-by-feature table into its pair-relation system
    Transform {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Break ties with seeded uniform noise of the given width
        #[arg(long, value_name = "SEED:SCALE")]
        jitter: Option<Jitter>,
        /// Expand text columns into one-vs-rest indicators
        #[arg(long)]
        expand_categorical: bool,
    },
    /// Recover per-object ranks from a transformed system (Copeland scores)
    Inverse {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Input holds per-pair vote weights in feature:A, feature:D, feature:T columns
        #[arg(long)]
        weighted: bool,
    },
    /// Rank features by mutual information with a decision column
    Score {
        /// One original table, or transformed files to merge before scoring
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        decision: String,
        /// kendall, width:K or freq:K
        #[arg(long, default_value = "kendall")]
        method: Method,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Merge independently transformed batches; cross-batch pairs become NA
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a seeded simulation and write one row per replicate
    Simulate {
        #[command(subcommand)]
        kind: Simulation,
    },
}

#[derive(Debug, Subcommand)]
enum Simulation {
    /// Estimator comparison on bivariate normal samples
    Bivariate {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Interaction experiment with two relevant features and one irrelevant
    Multivariate {
        /// Mixing weight(s), comma separated
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        lambda: Vec<f64>,
        /// linear or max
        #[arg(long, default_value = "linear")]
        mixture: Mixture,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Ranking agreement after rescaling a random half of the objects
    Integration {
        /// Original table; a synthetic one is generated when omitted
        #[arg(long, requires = "decision")]
        input: Option<PathBuf>,
        #[arg(long, requires = "input")]
        decision: Option<String>,
        #[arg(long, default_value_t = 3.0)]
        scale: f64,
        /// Synthetic table rows
        #[arg(long, default_value_t = 40)]
        objects: usize,
        /// Synthetic table feature columns
        #[arg(long, default_value_t = 20)]
        features: usize,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> table::Result<()> {
    let base = cli.log_base;
    match cli.command {
        Command::Transform { input, output, jitter, expand_categorical } => {
            commands::transform(&input, output.as_deref(), jitter, expand_categorical)
        }
        Command::Inverse { input, output, weighted } => commands::inverse(&input, output.as_deref(), weighted),
        Command::Score { inputs, decision, method, output } => {
            commands::score(&inputs, &decision, method, base, output.as_deref())
        }
        Command::Merge { inputs, output } => commands::merge(&inputs, output.as_deref()),
        Command::Simulate { kind } => match kind {
            Simulation::Bivariate { r, n, reps, output } => {
                commands::simulate_bivariate_cmd(r, n, reps, cli.seed, base, output.as_deref())
            }
            Simulation::Multivariate { lambda, mixture, n, reps, output } => {
                commands::simulate_multivariate_cmd(&lambda, mixture, n, reps, cli.seed, base, output.as_deref())
            }
            Simulation::Integration { input, decision, scale, objects, features, reps, output } => {
                let args = IntegrationArgs {
                    input: input.as_deref(),
                    decision: decision.as_deref(),
                    scale,
                    objects,
                    features,
                    reps,
                };
                commands::simulate_integration_cmd(args, cli.seed, output.as_deref())
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
