//! Command-line front end: single-point budgets, optimization, thresholds,
//! transmittance sweeps, figure data and the verification suite.

use std::io;

use clap::{Parser, Subcommand};
use qubus_core::BudgetError;

pub mod commands;
pub mod config;
pub mod figures;
pub mod output;
pub mod verify;

use config::Flags;
use figures::FigureName;

#[derive(Parser, Debug)]
#[command(name = "qubus", version, about = "Error budget for qubus entanglement generation under photon loss")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Error components at one parameter point (`--r opt` optimizes)
    ErrorProb,
    /// CSV data behind one of the figures
    Figure {
        #[arg(value_enum)]
        name: FigureName,
    },
    /// Minimize the total error over amplitude and squeezing
    Optimize,
    /// Least transmittance meeting `--target`
    Threshold,
    /// Optimized error over a transmittance grid, as CSV
    Sweep,
    /// Optimized error for a hardware loss scenario
    Scenario {
        #[arg(value_enum)]
        name: commands::Scenario,
    },
    /// Oracle and invariant checks
    Verify,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] BudgetError),
    #[error("{0}: {1}")]
    Io(String, #[source] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => 1,
            // an invariant the model asserts did not hold
            CliError::Model(BudgetError::NonMonotoneSweep { .. }) => 1,
            _ => 2,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.flags.load()?;
    match cli.command {
        Command::ErrorProb => commands::error_prob(&cfg),
        Command::Figure { name } => figures::emit(name, &cfg),
        Command::Optimize => commands::optimize(&cfg),
        Command::Threshold => commands::threshold(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Scenario { name } => commands::scenario(name, &cfg),
        Command::Verify => verify::run(&cfg),
    }
}
