//! Bures-metric Gaussian entanglement of symmetric two-mode states.
//!
//! For an entangled symmetric state the maximal fidelity to a separable
//! scaled standard state is 2κ̃₋/(κ̃₋ + ½)², which gives
//! E_B = (√(2κ̃₋) − 1)²/(2κ̃₋ + 1). [`numeric_max_fidelity`] recovers the
//! same maximum by direct search after the common beam-splitter
//! diagonalization.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::one_mode::OneModeCM;
use crate::optics::diagonalize_symmetric;
use crate::optimize::coordinate_descent;
use crate::standard_forms::SymmetricState;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BuresResult {
    pub e_b: f64,
    pub f_max: f64,
    pub kappa_tilde_minus: f64,
    pub d_bures: f64,
}

/// 2κ̃₋/(κ̃₋ + ½)² for 0 < κ̃₋ ≤ ½.
pub fn max_fidelity_closed(kappa_tilde_minus: f64) -> Result<f64> {
    let k = kappa_tilde_minus;
    if !(k > 0.0 && k <= 0.5) {
        return Err(Error::DomainError(format!("κ̃₋ = {k} outside (0, 1/2]")));
    }
    Ok(2.0 * k / ((k + 0.5) * (k + 0.5)))
}

/// E_B from κ̃₋ alone; zero on the separable side.
pub fn bures_from_kappa(kappa_tilde_minus: f64) -> Result<BuresResult> {
    let k = kappa_tilde_minus;
    if !(k > 0.0) {
        return Err(Error::DomainError(format!("κ̃₋ = {k} must be positive")));
    }
    if k >= 0.5 {
        return Ok(BuresResult {
            e_b: 0.0,
            f_max: 1.0,
            kappa_tilde_minus: k,
            d_bures: 0.0,
        });
    }
    let f_max = max_fidelity_closed(k)?;
    let root = (2.0 * k).sqrt();
    let e_b = (root - 1.0).powi(2) / (2.0 * k + 1.0);
    let d_bures = (2.0 - 2.0 * f_max.sqrt()).max(0.0).sqrt();
    Ok(BuresResult {
        e_b,
        f_max,
        kappa_tilde_minus: k,
        d_bures,
    })
}

pub fn bures_entanglement(s: &SymmetricState) -> Result<BuresResult> {
    s.ensure_physical()?;
    bures_from_kappa(s.kappa_tilde_minus())
}

/// Uhlmann fidelity of two undisplaced one-mode Gaussian states,
/// F = 1/(√(Δ + δ) − √δ) with Δ = det(V + V′) and δ = 4(detV − ¼)(detV′ − ¼).
pub fn one_mode_fidelity(v: &OneModeCM, w: &OneModeCM) -> Result<f64> {
    v.ensure_physical()?;
    w.ensure_physical()?;
    Ok(diag_fidelity(v.sigma_qq, v.sigma_pp, w.sigma_qq, w.sigma_pp))
}

#[inline]
fn diag_fidelity(q1: f64, p1: f64, q2: f64, p2: f64) -> f64 {
    let big = (q1 + q2) * (p1 + p2);
    let small = (4.0 * (q1 * p1 - 0.25) * (q2 * p2 - 0.25)).max(0.0);
    1.0 / ((big + small).sqrt() - small.sqrt())
}

/// Budget for [`numeric_max_fidelity`].
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub starts: usize,
    pub step_tol: f64,
    pub max_sweeps: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            starts: 8,
            step_tol: 1e-9,
            max_sweeps: 20_000,
        }
    }
}

/// Best separable candidate found by [`numeric_max_fidelity`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityOptimum {
    pub f_star: f64,
    pub b: f64,
    pub c: f64,
    pub d_abs: f64,
    /// Common local scale of the candidate.
    pub u: f64,
    /// Spread of the final values across starts.
    pub spread: f64,
}

impl FidelityOptimum {
    pub fn kappa_tilde_minus(&self) -> f64 {
        ((self.b - self.d_abs) * (self.b - self.c)).sqrt()
    }
}

/// Threshold surface (b − |d|)(b − c) = ¼ solved for b.
fn threshold_b(c: f64, d_abs: f64) -> f64 {
    0.5 * (c + d_abs + ((c - d_abs).powi(2) + 1.0).sqrt())
}

/// Product fidelity between the beam-splitter images of the form-II state and
/// of a separable symmetric candidate (c′, |d′|, u′) on the threshold surface.
pub struct ProductFidelity {
    given: [f64; 4],
}

impl ProductFidelity {
    pub fn new(s: &SymmetricState) -> Result<Self> {
        let v = s.form_ii_scale();
        Ok(Self {
            given: diagonalize_symmetric(s, v)?,
        })
    }

    /// Fidelity against an arbitrary symmetric candidate scaled by u on both modes.
    pub fn against(&self, b: f64, c: f64, d_abs: f64, u: f64) -> f64 {
        let g = &self.given;
        let m = [(b + c) * u, (b - d_abs) / u, (b - c) * u, (b + d_abs) / u];
        diag_fidelity(g[0], g[1], m[0], m[1]) * diag_fidelity(g[2], g[3], m[2], m[3])
    }

    pub fn on_threshold(&self, c: f64, d_abs: f64, u: f64) -> f64 {
        self.against(threshold_b(c, d_abs), c, d_abs, u)
    }
}

/// Maximizes the product of one-mode fidelities over separable symmetric
/// equally-scaled states on the κ̃₋′ = ½ surface.
///
/// Search variables are (c′, |d′|) with b′ fixed by the threshold condition,
/// plus the candidate's common log-scale relative to the form-II scale of `s`.
/// Starts run independently and must agree within 1e-6.
pub fn numeric_max_fidelity(s: &SymmetricState, budget: SearchBudget) -> Result<FidelityOptimum> {
    s.ensure_physical()?;
    if s.is_separable() {
        return Err(Error::DomainError("state is separable; maximal fidelity is 1".into()));
    }
    let objective = ProductFidelity::new(s)?;
    let v = s.form_ii_scale();
    let span = 4.0 * (s.b + s.c) + 4.0;
    let bounds = [(0.0, span), (0.0, span), (-4.0, 4.0)];
    let starts: Vec<[f64; 3]> = (0..budget.starts.max(1))
        .map(|i| {
            let c0 = if i & 1 == 0 { 0.1 } else { 1.2 } * (1.0 + s.c);
            let d0 = if i & 2 == 0 { 0.05 } else { 0.7 } * (1.0 + s.d_abs);
            let l0 = if i & 4 == 0 { -0.5 } else { 0.5 };
            // extra starts beyond the first eight are spread deterministically
            let shift = (i / 8) as f64 * 0.37;
            [c0 + shift, d0 + 0.5 * shift, l0 * (1.0 + shift)]
        })
        .collect();
    let runs: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|x0| {
            let f = |p: &[f64]| -objective.on_threshold(p[0], p[1], v * p[2].exp());
            let (x, fx, _) = coordinate_descent(f, x0, &bounds, budget.step_tol, budget.max_sweeps);
            (x, -fx)
        })
        .collect();
    let best = runs
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one start");
    let worst = runs.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let spread = best.1 - worst;
    if spread > 1e-6 {
        return Err(Error::OptimizerNoConverge(spread));
    }
    let (c, d_abs) = (best.0[0], best.0[1]);
    Ok(FidelityOptimum {
        f_star: best.1,
        b: threshold_b(c, d_abs),
        c,
        d_abs,
        u: v * best.0[2].exp(),
        spread,
    })
}
