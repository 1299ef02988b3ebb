use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gent_core::standard_forms::symmetric_sts;
use gent_core::{bures_entanglement, rel_ent_entanglement, Error, SymmetricState};
use rayon::prelude::*;
use serde::Serialize;

use crate::{CliError, VERSION};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Bures,
    Relent,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    /// Smallest symplectic eigenvalue of the partial transpose, in (0, ½].
    KappaTilde,
    /// Two-mode squeezing r ≥ 0.
    R,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub parameter: Parameter,
    #[arg(long, allow_hyphen_values = true)]
    pub start: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub stop: f64,
    #[arg(long)]
    pub steps: usize,
    /// Thermal occupation of the symmetric squeezed thermal family.
    #[arg(long, default_value_t = 0.0)]
    pub nbar: f64,
    #[arg(long, value_enum, default_value_t = Measure::Both)]
    pub measure: Measure,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// One sweep point; `None` columns are written as empty CSV fields.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Row {
    pub param: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub kappa_tilde_minus: f64,
    pub e_b: Option<f64>,
    pub e_s: Option<f64>,
    pub x1_star: Option<f64>,
    pub x2_star: Option<f64>,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    version: &'static str,
    parameter: Parameter,
    measure: Measure,
    nbar: f64,
    rows: &'a [Row],
}

fn validate(a: &SweepArgs) -> Result<(), CliError> {
    let bad = |m: String| Err(CliError::Core(Error::Parse(m)));
    if !(a.start < a.stop) {
        return bad(format!("field `start` must be below `stop` ({} ≥ {})", a.start, a.stop));
    }
    if a.steps < 2 {
        return bad(format!("field `steps` must be at least 2, got {}", a.steps));
    }
    if !(a.nbar >= 0.0 && a.nbar.is_finite()) {
        return bad(format!("field `nbar` must be ≥ 0, got {}", a.nbar));
    }
    match a.parameter {
        Parameter::KappaTilde => {
            if !(a.start > 0.0 && a.stop <= 0.5) {
                return bad(format!(
                    "kappa_tilde range must lie in (0, 1/2], got [{}, {}]",
                    a.start, a.stop
                ));
            }
            if a.stop > a.nbar + 0.5 {
                return bad(format!(
                    "kappa_tilde {} exceeds nbar + 1/2 = {}; no squeezed thermal state reaches it",
                    a.stop,
                    a.nbar + 0.5
                ));
            }
        }
        Parameter::R => {
            if !(a.start >= 0.0) {
                return bad(format!("field `start` must be ≥ 0 for r sweeps, got {}", a.start));
            }
        }
    }
    Ok(())
}

fn state_at(parameter: Parameter, x: f64, nbar: f64) -> SymmetricState {
    match parameter {
        // κ̃₋ = (n̄ + ½) e^{−2r}
        Parameter::KappaTilde => symmetric_sts(0.5 * ((nbar + 0.5) / x).ln(), nbar),
        Parameter::R => symmetric_sts(x, nbar),
    }
}

pub fn rows(a: &SweepArgs) -> Result<Vec<Row>, CliError> {
    validate(a)?;
    let n = a.steps;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let x = a.start + (a.stop - a.start) * i as f64 / (n - 1) as f64;
            let s = state_at(a.parameter, x, a.nbar);
            let mut row = Row {
                param: x,
                b: s.b,
                c: s.c,
                d: 0.0 - s.d_abs,
                kappa_plus: s.kappa_plus(),
                kappa_minus: s.kappa_minus(),
                kappa_tilde_minus: s.kappa_tilde_minus(),
                e_b: None,
                e_s: None,
                x1_star: None,
                x2_star: None,
            };
            if a.measure != Measure::Relent {
                row.e_b = Some(bures_entanglement(&s)?.e_b);
            }
            if a.measure != Measure::Bures {
                let r = rel_ent_entanglement(&s)?;
                row.e_s = Some(r.e_s);
                if !s.is_separable() {
                    row.x1_star = Some(r.x1_star);
                    row.x2_star = Some(r.x2_star);
                }
            }
            Ok(row)
        })
        .collect()
}

pub fn run(a: &SweepArgs) -> Result<u8, CliError> {
    let rows = rows(a)?;
    let unwritable = |e: &dyn std::fmt::Display| CliError::Output(format!("cannot write {}: {e}", a.output.display()));
    match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(&a.output).map_err(|e| unwritable(&e))?;
            for row in &rows {
                w.serialize(row).map_err(|e| unwritable(&e))?;
            }
            w.flush().map_err(|e| unwritable(&e))?;
        }
        Format::Json => {
            let report = SweepReport {
                version: VERSION,
                parameter: a.parameter,
                measure: a.measure,
                nbar: a.nbar,
                rows: &rows,
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            std::fs::write(&a.output, text + "\n").map_err(|e| unwritable(&e))?;
        }
    }
    log::info!("wrote {} rows to {}", rows.len(), a.output.display());
    Ok(0)
}
