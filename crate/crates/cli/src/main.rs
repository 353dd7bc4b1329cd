//! `nestkit`: property suites, example replays, searches and one-off
//! analysis of nest instances.
//!
//! Exit status is 0 when everything passes, 1 when a violation is found
//! and 2 for usage or input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nestkit::harness::{SearchMode, DEFAULT_ITERS, DEFAULT_SEED, WORKERS_ENV};

#[derive(Parser, Debug)]
#[command(name = "nestkit", version, about = "Nest orders, topologies and their property suites")]
struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

impl From<Mode> for SearchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exhaustive => SearchMode::Exhaustive,
            Mode::Random => SearchMode::Random,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a property suite.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ITERS)]
        iters: usize,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Search for witnesses or counterexamples.
    Search {
        #[arg(long)]
        property: String,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        max_members: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Builtin group name for the group targets.
        #[arg(long)]
        group: Option<String>,
        /// Directory for witness instance files.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Replay a worked example.
    Demo {
        /// Example id, or `all`.
        #[arg(long)]
        example: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Analyze a finite instance or a ray nest.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Dual partner of a nest input.
        #[arg(long)]
        partner: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cover characterizations and bounds of a subset under a nest.
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        subset: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Group compatibility and continuity checks.
    GroupCheck {
        /// Builtin name (Z<n>, Z2xZ2, S3, D4) or a JSON Cayley table file.
        #[arg(long)]
        group: String,
        #[arg(long)]
        nest: PathBuf,
        /// Second family for the two-family checks.
        #[arg(long)]
        right: Option<PathBuf>,
        #[arg(long, value_parser = ["5.1", "5.2", "5.3"], default_value = "5.1")]
        prop: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.workers {
        std::env::set_var(WORKERS_ENV, k.to_string());
    }
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
