//! `walklab`: named random-walk experiments with CSV rows and a JSON summary.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 invalid input,
//! 3 numeric failure or timeout.

mod catalog;
mod experiments;
mod report;
mod spec;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use catalog::Experiment;
use spec::{ResolvedSpec, RunArgs};

#[derive(Parser)]
#[command(name = "walklab", version, about = "Random-walk experiments: exact oracles and seeded Monte Carlo")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every experiment.
    List,
    /// Print the result an experiment reproduces, its inputs and acceptance rule.
    Describe { id: String },
    /// K_n, P_n and Z_n hitting and cover times against closed forms.
    ClosedForms(RunArgs),
    /// Exact cover time against the Matthews, MERST and spanning-tree bounds.
    BoundsSandwich(RunArgs),
    /// Commute time against c(G) R(u, v).
    CommuteIdentity(RunArgs),
    /// Largest effective resistance on square grids.
    GridResistance(RunArgs),
    /// Cover-time bounds for Cartesian products.
    ProductTheorem(RunArgs),
    /// Cover time of configuration-model graphs.
    DegseqCover(RunArgs),
    /// Exact and sweep conductance with the spectral sandwich.
    ConductanceSurvey(RunArgs),
    /// Probability that a configuration is simple.
    PSimple(RunArgs),
    /// Min-deg weighting speed-up and invariants.
    SchemeSpeedup(RunArgs),
    /// Random-walk s-t connectivity.
    StConnectDemo(RunArgs),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Spec { field: String, message: String },
    #[error(transparent)]
    Core(#[from] walklab::Error),
    #[error("output: {0}")]
    Io(String),
}

impl CliError {
    pub fn spec(field: &str, message: impl ToString) -> Self {
        CliError::Spec {
            field: field.to_string(),
            message: message.to_string(),
        }
    }

    pub fn io(e: impl ToString) -> Self {
        CliError::Io(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        use walklab::Error as E;
        match self {
            CliError::Core(
                E::Numeric(_) | E::MixingTimeout { .. } | E::Singular(_) | E::RejectionFailure { .. } | E::NotReversible(_),
            ) => 3,
            _ => 2,
        }
    }
}

fn run(experiment: Experiment, args: RunArgs) -> Result<bool, CliError> {
    let clock = Instant::now();
    let spec = ResolvedSpec::resolve(experiment, args)?;
    let outcome = experiments::run(&spec)?;
    outcome.emit(&spec, clock.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::List => {
            for e in Experiment::ALL {
                println!("{:<20} {}", e.id(), e.describe().summary);
            }
            return ExitCode::SUCCESS;
        }
        Command::Describe { id } => {
            return match id.parse::<Experiment>() {
                Ok(e) => {
                    let d = e.describe();
                    println!("{}: {}\nresult: {}\ninputs: {}\nacceptance: {}", e.id(), d.summary, d.result, d.inputs, d.acceptance);
                    ExitCode::SUCCESS
                }
                Err(message) => {
                    eprintln!("error: {message}");
                    ExitCode::from(2)
                }
            };
        }
        Command::ClosedForms(a) => (Experiment::ClosedForms, a),
        Command::BoundsSandwich(a) => (Experiment::BoundsSandwich, a),
        Command::CommuteIdentity(a) => (Experiment::CommuteIdentity, a),
        Command::GridResistance(a) => (Experiment::GridResistance, a),
        Command::ProductTheorem(a) => (Experiment::ProductTheorem, a),
        Command::DegseqCover(a) => (Experiment::DegseqCover, a),
        Command::ConductanceSurvey(a) => (Experiment::ConductanceSurvey, a),
        Command::PSimple(a) => (Experiment::PSimple, a),
        Command::SchemeSpeedup(a) => (Experiment::SchemeSpeedup, a),
        Command::StConnectDemo(a) => (Experiment::StConnectDemo, a),
    };
    match run(experiment, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
