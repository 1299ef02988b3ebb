//! `gent`: entanglement measures of two-mode Gaussian states from the command line.
//!
//! Exit codes: 0 separable (or success), 1 bad input or unwritable output,
//! 2 unphysical state, 3 entangled, 4 state is not symmetric, 5 support violation.

mod input;
mod oracle;
mod report;
mod sweep;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gent_core::Error;

use input::StateArgs;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "gent",
    version,
    about = "Bures and relative-entropy entanglement of two-mode Gaussian states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Physicality, separability, symplectic spectrum and standard form.
    Check {
        #[command(flatten)]
        state: StateArgs,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Bures-metric entanglement of a symmetric state.
    Bures {
        #[command(flatten)]
        state: StateArgs,
        /// Also run the numeric maximal-fidelity search and report the discrepancy.
        #[arg(long)]
        verify: bool,
    },
    /// Gaussian relative entropy of entanglement of a symmetric state.
    Relent {
        #[command(flatten)]
        state: StateArgs,
        /// Also run a grid search over the separable candidates and report the discrepancy.
        #[arg(long)]
        verify: bool,
    },
    /// Tabulate measures along a family of symmetric squeezed thermal states.
    Sweep(sweep::SweepArgs),
    /// Truncated Fock-basis cross-checks of the closed forms.
    #[command(subcommand)]
    Oracle(oracle::OracleCommand),
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// The state could not be read at all.
    Input(Error),
    Usage(String),
    Output(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                Error::UnphysicalState(_) | Error::NonPositiveDefinite(_) | Error::NumericalDegeneracy(_),
            ) => 2,
            CliError::Core(Error::NotSymmetric(_)) => 4,
            CliError::Core(Error::SupportViolation(_)) => 5,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(Error::NotSymmetric(gap)) => {
                write!(
                    f,
                    "state is not symmetric (|detV1 − detV2| = {gap:e}); the measures need detV1 = detV2"
                )
            }
            CliError::Core(e) | CliError::Input(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Output(m) => f.write_str(m),
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check { state, json } => report::check(&state.load()?, json),
        Command::Bures { state, verify } => report::bures(&state.load()?, verify),
        Command::Relent { state, verify } => report::relent(&state.load()?, verify),
        Command::Sweep(args) => sweep::run(&args),
        Command::Oracle(cmd) => oracle::run(&cmd),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GENT_LOG", "warn")).init();
    // clap's own usage errors would exit with 2, which means "unphysical" here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
