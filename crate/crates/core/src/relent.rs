//! Gaussian relative entropy of entanglement for symmetric two-mode states.
//!
//! After the balanced beam splitter both the given state and every separable
//! symmetric candidate on the threshold surface are product states, so the
//! two-mode relative entropy splits into two one-mode terms that are minimized
//! independently over the candidate's symplectic eigenvalues x1, x2 > ½.
//! Entropies are in nats.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::one_mode::OneModeCM;
use crate::optimize::{bracket_by_doubling, golden_section};
use crate::standard_forms::SymmetricState;

/// Starting offset above x = ½ for the bracket search.
pub const BRACKET_START: f64 = 1e-9;
/// Golden-section termination width in x.
pub const X_TOL: f64 = 1e-10;
const BRACKET_LIMIT: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelEntResult {
    pub e_s: f64,
    pub x1_star: f64,
    pub x2_star: f64,
    pub q_s1: f64,
    pub q_s2: f64,
    pub s_n1: f64,
    pub s_n2: f64,
    /// The unconstrained minimizers have x1 < x2.
    pub ordering_violation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeMinimum {
    pub x_star: f64,
    pub value: f64,
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// von Neumann entropy of a thermal state with symplectic eigenvalue ν.
pub fn entropy_of_nu(nu: f64) -> f64 {
    xlogx(nu + 0.5) - xlogx(nu - 0.5)
}

/// S_N = (ν + ½) ln(ν + ½) − (ν − ½) ln(ν − ½), ν = √(σ_qq σ_pp).
pub fn von_neumann_entropy(v: &OneModeCM) -> Result<f64> {
    let nu = v.ensure_physical()?;
    Ok(entropy_of_nu(nu))
}

/// S(ρ′/ρ) = Tr[ρ(ln ρ − ln ρ′)] for diagonal one-mode CMs (`vp` for ρ′, `v` for ρ).
pub fn rel_entropy_one_mode(vp: &OneModeCM, v: &OneModeCM) -> Result<f64> {
    let nu = v.ensure_physical()?;
    let nup = vp.ensure_physical()?;
    if vp == v {
        return Ok(0.0);
    }
    let k = (v.sigma_qq * vp.sigma_pp + v.sigma_pp * vp.sigma_qq) / nup;
    let upper = 0.5 * (nup + 0.5).ln() * (1.0 + k);
    let lower_coeff = 1.0 - k;
    let lower = if nup - 0.5 <= crate::one_mode::PURE_TOL {
        if lower_coeff.abs() > 1e-12 {
            return Err(Error::SupportViolation(lower_coeff.abs()));
        }
        0.0
    } else {
        0.5 * (nup - 0.5).ln() * lower_coeff
    };
    Ok(-entropy_of_nu(nu) + upper + lower)
}

/// One brace of the separated two-mode relative entropy:
/// ½ ln(x+½)[1 + K] + ½ ln(x−½)[1 − K], K = (κ² + 4x²κ̃²)/(2xκ̃).
pub fn mode_objective(x: f64, kappa_sq: f64, kt: f64) -> Result<f64> {
    if !(x > 0.5) {
        return Err(Error::DomainError(format!("x = {x} must exceed 1/2")));
    }
    Ok(mode_objective_unchecked(x, kappa_sq, kt))
}

#[inline]
pub(crate) fn mode_objective_unchecked(x: f64, kappa_sq: f64, kt: f64) -> f64 {
    let k = (kappa_sq + 4.0 * x * x * kt * kt) / (2.0 * x * kt);
    0.5 * (x + 0.5).ln() * (1.0 + k) + 0.5 * (x - 0.5).ln() * (1.0 - k)
}

/// Global minimum of [`mode_objective`] over x ∈ (½, ∞): doubling bracket
/// from ½ + 1e-9, then golden section to width `tol`.
pub fn minimize_mode(kappa_sq: f64, kt: f64, tol: f64) -> Result<ModeMinimum> {
    if !(kt > 0.0 && kt < 0.5) {
        return Err(Error::DomainError(format!("κ̃₋ = {kt} outside (0, 1/2)")));
    }
    let f = |x: f64| mode_objective_unchecked(x, kappa_sq, kt);
    let (lo, hi) = bracket_by_doubling(f, 0.5, BRACKET_START, BRACKET_LIMIT)?;
    let lo = lo.max(0.5 + f64::EPSILON);
    let (x_star, value) = golden_section(f, lo, hi, tol);
    log::debug!("mode minimum κ² = {kappa_sq:.6}: x* = {x_star:.10}, value = {value:.12}");
    Ok(ModeMinimum { x_star, value })
}

/// Reduced one-mode CMs of the beam-splitter image of the form-II state:
/// diag(κ₊²/κ̃₋, κ̃₋) and diag(κ̃₋, κ₋²/κ̃₋).
pub fn transformed_reductions(s: &SymmetricState) -> (OneModeCM, OneModeCM) {
    let (kp, km, kt) = (s.kappa_plus(), s.kappa_minus(), s.kappa_tilde_minus());
    (
        OneModeCM {
            sigma_qq: kp * kp / kt,
            sigma_pp: kt,
        },
        OneModeCM {
            sigma_qq: kt,
            sigma_pp: km * km / kt,
        },
    )
}

/// Separable product candidate diag(2x1², ½) ⊗ diag(½, 2x2²) on the threshold surface.
pub fn threshold_candidate(x1: f64, x2: f64) -> (OneModeCM, OneModeCM) {
    (
        OneModeCM {
            sigma_qq: 2.0 * x1 * x1,
            sigma_pp: 0.5,
        },
        OneModeCM {
            sigma_qq: 0.5,
            sigma_pp: 2.0 * x2 * x2,
        },
    )
}

/// Two-mode relative entropy of the threshold candidate (x1, x2) with respect to `s`.
pub fn two_mode_objective(s: &SymmetricState, x1: f64, x2: f64) -> Result<f64> {
    let (kp, km, kt) = (s.kappa_plus(), s.kappa_minus(), s.kappa_tilde_minus());
    Ok(-entropy_of_nu(kp) - entropy_of_nu(km) + mode_objective(x1, kp * kp, kt)? + mode_objective(x2, km * km, kt)?)
}

/// E_S(s) = Q_S(ρ̃₁) + Q_S(ρ̃₂).
pub fn rel_ent_entanglement(s: &SymmetricState) -> Result<RelEntResult> {
    s.ensure_physical()?;
    let (kp, km, kt) = (s.kappa_plus(), s.kappa_minus(), s.kappa_tilde_minus());
    let s_n1 = entropy_of_nu(kp);
    let s_n2 = entropy_of_nu(km);
    if s.is_separable() {
        return Ok(RelEntResult {
            e_s: 0.0,
            x1_star: kp,
            x2_star: km,
            q_s1: 0.0,
            q_s2: 0.0,
            s_n1,
            s_n2,
            ordering_violation: false,
        });
    }
    let (m1, m2) = rayon::join(
        || minimize_mode(kp * kp, kt, X_TOL),
        || minimize_mode(km * km, kt, X_TOL),
    );
    let (m1, m2) = (m1?, m2?);
    // rounding can leave a tiny negative remainder right at the boundary
    let q_s1 = (m1.value - s_n1).max(0.0);
    let q_s2 = (m2.value - s_n2).max(0.0);
    let ordering_violation = m1.x_star < m2.x_star;
    if ordering_violation {
        log::info!("unconstrained minimizers x1 = {} < x2 = {}", m1.x_star, m2.x_star);
    }
    Ok(RelEntResult {
        e_s: q_s1 + q_s2,
        x1_star: m1.x_star,
        x2_star: m2.x_star,
        q_s1,
        q_s2,
        s_n1,
        s_n2,
        ordering_violation,
    })
}
