use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod csvout;
mod validate;

#[derive(Parser)]
#[command(name = "risevt", version, about = "Order-statistic SNR analysis for multi-surface link selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config trial count.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// CDFs of the k-th largest SNR on a grid, per mode, plus pairwise KS distances.
    Cdf {
        #[arg(long)]
        config: PathBuf,
    },
    /// Outage probability and outage capacity over an SNR sweep.
    Outage {
        #[arg(long)]
        config: PathBuf,
    },
    /// Average throughput, analytic and simulated.
    Throughput {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the self-check suite.
    Validate {
        /// Flip the sign of c1 before the simulation checks (mutation test).
        #[arg(long)]
        perturb: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl From<ris_evt::Error> for CliError {
    fn from(e: ris_evt::Error) -> Self {
        match e {
            ris_evt::Error::Numerical { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub struct RunOptions {
    pub out: PathBuf,
    pub out_given: bool,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads: must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let opts = RunOptions {
        out_given: cli.out.is_some(),
        out: cli.out.unwrap_or_else(|| PathBuf::from(".")),
        seed: cli.seed,
        trials: cli.trials,
    };
    match cli.command {
        Command::Validate { perturb } => validate::run(&opts, perturb),
        Command::Cdf { config } => {
            let l = config::load(&config)?;
            commands::cdf(&l.config, &l.bytes, &opts).map(|_| true)
        }
        Command::Outage { config } => {
            let l = config::load(&config)?;
            commands::outage(&l.config, &l.bytes, &opts).map(|_| true)
        }
        Command::Throughput { config } => {
            let l = config::load(&config)?;
            commands::throughput(&l.config, &l.bytes, &opts).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed");
            ExitCode::from(4)
        }
        Err(CliError::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(m)) => {
            eprintln!("numerical error: {m}");
            ExitCode::from(3)
        }
        Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
