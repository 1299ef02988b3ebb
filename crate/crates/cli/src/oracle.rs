use std::path::PathBuf;

use clap::{Args, Subcommand};
use gent_core::bures::one_mode_fidelity;
use gent_core::fock::{
    entropy_fock, fidelity_fock, gaussian_state_from_cm, gaussian_state_one_mode, rel_entropy_fock, FockOperator,
    DEFAULT_DIM_ONE_MODE, DEFAULT_DIM_TWO_MODE, TRUNCATION_TOL,
};
use gent_core::relent::{entropy_of_nu, rel_entropy_one_mode, von_neumann_entropy};
use gent_core::{symplectic_spectrum, OneModeCM, TwoModeCM};
use serde::Serialize;

use crate::input::parse_diag;
use crate::{CliError, VERSION};

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Uhlmann fidelity of two states.
    Fidelity(PairArgs),
    /// S(ρ′/ρ) = Tr ρ(ln ρ − ln ρ′) with ρ = --state and ρ′ = --other.
    Relent(PairArgs),
    /// von Neumann entropy in nats.
    Entropy(SingleArgs),
}

#[derive(Args, Debug)]
pub struct SingleArgs {
    /// Diagonal one-mode CM as QQ,PP
    #[arg(long, conflicts_with = "cm", required_unless_present = "cm")]
    pub state: Option<String>,
    /// Two-mode CM file
    #[arg(long, value_name = "FILE")]
    pub cm: Option<PathBuf>,
    /// Levels kept per mode (default 60 for one mode, 20 for two)
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[command(flatten)]
    pub first: SingleArgs,
    /// Second one-mode CM as QQ,PP
    #[arg(long, conflicts_with = "cm_other")]
    pub other: Option<String>,
    /// Second two-mode CM file
    #[arg(long, value_name = "FILE")]
    pub cm_other: Option<PathBuf>,
}

enum Cm {
    One(OneModeCM),
    Two(TwoModeCM),
}

impl Cm {
    fn modes(&self) -> usize {
        match self {
            Cm::One(_) => 1,
            Cm::Two(_) => 2,
        }
    }

    fn build(&self, dim: usize) -> Result<FockOperator, CliError> {
        Ok(match self {
            Cm::One(v) => gaussian_state_one_mode(v, dim)?,
            Cm::Two(v) => gaussian_state_from_cm(v, dim)?,
        })
    }
}

fn read(field: &str, diag: &Option<String>, file: &Option<PathBuf>) -> Result<Cm, CliError> {
    match (diag, file) {
        (Some(text), _) => Ok(Cm::One(parse_diag(field, text)?)),
        (None, Some(path)) => Ok(Cm::Two(TwoModeCM::load(path).map_err(CliError::Input)?)),
        (None, None) => Err(CliError::Usage(format!("missing `--{field}` state"))),
    }
}

#[derive(Serialize)]
struct OracleReport {
    version: &'static str,
    quantity: &'static str,
    modes: usize,
    dim: usize,
    trace_deficit: f64,
    /// Deficit within the tolerance below which oracle values are trusted.
    admissible: bool,
    oracle: f64,
    closed_form: Option<f64>,
    discrepancy: Option<f64>,
}

fn finish(
    quantity: &'static str,
    modes: usize,
    dim: usize,
    states: &[&FockOperator],
    oracle: f64,
    closed: Option<f64>,
) -> u8 {
    let trace_deficit = states.iter().map(|s| s.trace_deficit.abs()).fold(0.0, f64::max);
    let admissible = trace_deficit <= TRUNCATION_TOL;
    if !admissible {
        log::warn!("trace deficit {trace_deficit:e} above {TRUNCATION_TOL:e}; raise --dim");
    }
    let report = OracleReport {
        version: VERSION,
        quantity,
        modes,
        dim,
        trace_deficit,
        admissible,
        oracle,
        closed_form: closed,
        discrepancy: closed.map(|c| (c - oracle).abs()),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    0
}

fn default_dim(modes: usize) -> usize {
    if modes == 1 {
        DEFAULT_DIM_ONE_MODE
    } else {
        DEFAULT_DIM_TWO_MODE
    }
}

fn pair(args: &PairArgs) -> Result<(Cm, Cm, usize), CliError> {
    let a = read("state", &args.first.state, &args.first.cm)?;
    let b = read("other", &args.other, &args.cm_other)?;
    if a.modes() != b.modes() {
        return Err(CliError::Usage("both states need the same number of modes".into()));
    }
    let dim = args.first.dim.unwrap_or_else(|| default_dim(a.modes()));
    Ok((a, b, dim))
}

pub fn run(cmd: &OracleCommand) -> Result<u8, CliError> {
    match cmd {
        OracleCommand::Fidelity(args) => {
            let (a, b, dim) = pair(args)?;
            let (ra, rb) = (a.build(dim)?, b.build(dim)?);
            let oracle = fidelity_fock(&ra, &rb)?;
            let closed = match (&a, &b) {
                (Cm::One(v), Cm::One(w)) => Some(one_mode_fidelity(v, w)?),
                _ => None,
            };
            Ok(finish("fidelity", a.modes(), dim, &[&ra, &rb], oracle, closed))
        }
        OracleCommand::Relent(args) => {
            let (a, b, dim) = pair(args)?;
            let closed = match (&a, &b) {
                (Cm::One(v), Cm::One(vp)) => Some(rel_entropy_one_mode(vp, v)?),
                _ => None,
            };
            let (rho, rho_prime) = (a.build(dim)?, b.build(dim)?);
            let oracle = rel_entropy_fock(&rho_prime, &rho)?;
            Ok(finish(
                "relative_entropy",
                a.modes(),
                dim,
                &[&rho, &rho_prime],
                oracle,
                closed,
            ))
        }
        OracleCommand::Entropy(args) => {
            let a = read("state", &args.state, &args.cm)?;
            let dim = args.dim.unwrap_or_else(|| default_dim(a.modes()));
            let closed = match &a {
                Cm::One(v) => von_neumann_entropy(v)?,
                Cm::Two(v) => {
                    let sp = symplectic_spectrum(v)?;
                    entropy_of_nu(sp.kappa_plus) + entropy_of_nu(sp.kappa_minus)
                }
            };
            let rho = a.build(dim)?;
            Ok(finish(
                "entropy",
                a.modes(),
                dim,
                &[&rho],
                entropy_fock(&rho),
                Some(closed),
            ))
        }
    }
}
