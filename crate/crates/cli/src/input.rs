use std::path::PathBuf;

use clap::Args;
use gent_core::standard_forms::symmetric_sts;
use gent_core::{Error, StandardFormI, TwoModeCM};

use crate::CliError;

/// One of the three ways to name a two-mode state.
#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// JSON covariance matrix file: {"v": [[...4...], ...4 rows...]}
    #[arg(long, value_name = "FILE", conflicts_with_all = ["b", "r"])]
    pub cm: Option<PathBuf>,
    /// Standard-form diagonal b (with --c and --d)
    #[arg(long, allow_hyphen_values = true, requires_all = ["c", "d"], conflicts_with = "r")]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "b")]
    pub c: Option<f64>,
    /// Signed momentum correlation d of the standard form
    #[arg(long, allow_hyphen_values = true, requires = "b")]
    pub d: Option<f64>,
    /// Squeezing of a symmetric squeezed thermal state (with --nbar)
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 0.0, requires = "r")]
    pub nbar: f64,
}

impl StateArgs {
    pub fn load(&self) -> Result<TwoModeCM, CliError> {
        if let Some(path) = &self.cm {
            // any failure to read a usable matrix is an input error, including asymmetry
            return TwoModeCM::load(path).map_err(CliError::Input);
        }
        if let (Some(b), Some(c), Some(d)) = (self.b, self.c, self.d) {
            for (name, x) in [("b", b), ("c", c), ("d", d)] {
                if !x.is_finite() {
                    return Err(Error::Parse(format!("field `{name}` is not finite")).into());
                }
            }
            return Ok(StandardFormI { b1: b, b2: b, c, d }.to_cm());
        }
        if let Some(r) = self.r {
            if !(self.nbar >= 0.0) || !r.is_finite() {
                return Err(Error::Parse(format!("field `nbar` must be ≥ 0, got {}", self.nbar)).into());
            }
            let s = symmetric_sts(r.abs(), self.nbar);
            return Ok(s.to_cm());
        }
        Err(CliError::Usage(
            "give a state with --cm FILE, --b/--c/--d, or --r [--nbar]".into(),
        ))
    }
}

/// "σqq,σpp" for a diagonal one-mode CM.
pub fn parse_diag(field: &str, text: &str) -> Result<gent_core::OneModeCM, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Error::Parse(format!("field `{field}`: expected QQ,PP, got `{text}`"));
    if parts.len() != 2 {
        return Err(bad().into());
    }
    let qq: f64 = parts[0].parse().map_err(|_| bad())?;
    let pp: f64 = parts[1].parse().map_err(|_| bad())?;
    Ok(gent_core::OneModeCM::new(qq, pp)?)
}
