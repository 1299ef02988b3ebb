//! Standard forms of two-mode covariance matrices.
//!
//! Form I has V1 = b1·I, V2 = b2·I and diagonal C = diag(c, d). Form II is a
//! locally squeezed form I; for symmetric states the squeeze factor is known
//! in closed form, for the general case only the residuals of the defining
//! algebraic system are exposed.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::cm::{invariants, is_physical, TwoModeCM, KAPPA_TOL};
use crate::error::{Error, Result};

const BRANCH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardFormI {
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
    pub d: f64,
}

impl StandardFormI {
    pub fn to_cm(&self) -> TwoModeCM {
        make_scaled_cm(&ScaledState {
            base: *self,
            u1: 1.0,
            u2: 1.0,
        })
    }
}

/// Result of [`to_standard_form_i`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Reduction {
    pub form: StandardFormI,
    /// detC vanished while C itself did not; d was set to 0.
    pub rank_one_cross: bool,
}

/// Symmetric standard-form parameters with d = -|d| and c ≥ |d|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricState {
    pub b: f64,
    pub c: f64,
    pub d_abs: f64,
}

impl SymmetricState {
    /// Checks c ≥ |d| ≥ 0 and b > c. Physicality is a separate question, see
    /// [`SymmetricState::is_physical`].
    pub fn new(b: f64, c: f64, d_abs: f64) -> Result<Self> {
        if ![b, c, d_abs].iter().all(|x| x.is_finite()) {
            return Err(Error::DomainError("non-finite standard parameter".into()));
        }
        if d_abs < 0.0 || c < d_abs - 1e-15 {
            return Err(Error::DomainError(format!(
                "need c ≥ |d| ≥ 0, got c = {c}, |d| = {d_abs}"
            )));
        }
        if b - c <= 0.0 {
            return Err(Error::DomainError(format!("need b > c, got b = {b}, c = {c}")));
        }
        Ok(Self { b, c, d_abs })
    }

    /// Reads a symmetric standard form off an arbitrary covariance matrix.
    ///
    /// Fails with `NotSymmetric` when |detV1 - detV2| ≥ 1e-9, and with
    /// `DomainError` when the reduced d is positive (such states are separable
    /// and are not represented by this type).
    pub fn from_cm(v: &TwoModeCM) -> Result<Self> {
        let inv = invariants(v);
        let gap = (inv.det_v1 - inv.det_v2).abs();
        if gap >= 1e-9 {
            return Err(Error::NotSymmetric(gap));
        }
        let red = to_standard_form_i(v)?;
        let f = red.form;
        if f.d > 0.0 {
            return Err(Error::DomainError(format!("reduced d = {} is positive", f.d)));
        }
        Self::new(0.5 * (f.b1 + f.b2), f.c, -f.d)
    }

    pub fn to_standard(&self) -> StandardFormI {
        StandardFormI {
            b1: self.b,
            b2: self.b,
            c: self.c,
            d: -self.d_abs,
        }
    }

    pub fn to_cm(&self) -> TwoModeCM {
        self.to_standard().to_cm()
    }

    pub fn kappa_plus(&self) -> f64 {
        ((self.b - self.d_abs) * (self.b + self.c)).sqrt()
    }

    pub fn kappa_minus(&self) -> f64 {
        ((self.b + self.d_abs) * (self.b - self.c)).sqrt()
    }

    pub fn kappa_tilde_minus(&self) -> f64 {
        ((self.b - self.d_abs) * (self.b - self.c)).sqrt()
    }

    pub fn is_physical(&self) -> bool {
        self.kappa_minus() >= 0.5 - KAPPA_TOL
    }

    pub fn is_separable(&self) -> bool {
        self.kappa_tilde_minus() >= 0.5 - KAPPA_TOL
    }

    pub(crate) fn ensure_physical(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::UnphysicalState(self.kappa_minus()))
        }
    }

    /// Form-II squeeze factor v = √((b - |d|)/(b - c)).
    pub fn form_ii_scale(&self) -> f64 {
        ((self.b - self.d_abs) / (self.b - self.c)).sqrt()
    }
}

/// Standard form I with local scale factors (u1, u2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledState {
    pub base: StandardFormI,
    pub u1: f64,
    pub u2: f64,
}

/// Symmetric squeezed thermal state: b = (n̄ + ½) cosh 2r, c = |d| = (n̄ + ½) sinh 2r.
pub fn symmetric_sts(r: f64, nbar: f64) -> SymmetricState {
    let nu = nbar + 0.5;
    let s = nu * (2.0 * r).sinh();
    SymmetricState {
        b: nu * (2.0 * r).cosh(),
        c: s,
        d_abs: s,
    }
}

/// Reduction to standard form I by matching the four local invariants.
///
/// Uses c ≥ |d| and sign(d) = sign(detC).
pub fn to_standard_form_i(v: &TwoModeCM) -> Result<Reduction> {
    let phys = is_physical(v);
    if !phys.physical {
        return Err(Error::UnphysicalState(phys.kappa_minus));
    }
    let inv = invariants(v);
    let b1 = inv.det_v1.sqrt();
    let b2 = inv.det_v2.sqrt();
    let bb = b1 * b2;
    // detV = b1²b2² + c²d² - b1b2(c² + d²)
    let sum_sq = (bb * bb + inv.det_c * inv.det_c - inv.det_v) / bb;
    let disc = sum_sq * sum_sq - 4.0 * inv.det_c * inv.det_c;
    let scale = sum_sq.abs().max(1.0);
    if sum_sq < -BRANCH_TOL * scale || disc < -BRANCH_TOL * scale * scale {
        return Err(Error::BranchAmbiguity(disc));
    }
    let sum_sq = sum_sq.max(0.0);
    let root = disc.max(0.0).sqrt();
    let c2 = 0.5 * (sum_sq + root);
    let d2 = (0.5 * (sum_sq - root)).max(0.0);
    let c = c2.sqrt();
    let c_block = v.blocks().c;
    let rank_one_cross = inv.det_c == 0.0 && c_block.abs().max() > 0.0;
    let d = if inv.det_c == 0.0 {
        0.0
    } else if c > 0.0 {
        // |d| from the product keeps c·d = detC exact
        inv.det_c / c
    } else {
        d2.sqrt().copysign(inv.det_c)
    };
    Ok(Reduction {
        form: StandardFormI { b1, b2, c, d },
        rank_one_cross,
    })
}

/// Symmetric form II: returns (v, V_II) with V_II the standard CM scaled by u1 = u2 = v.
pub fn form_ii_symmetric(s: &SymmetricState) -> Result<(f64, TwoModeCM)> {
    if s.b - s.c <= 0.0 {
        return Err(Error::DomainError(format!("b - c = {} must be positive", s.b - s.c)));
    }
    s.ensure_physical()?;
    let v = s.form_ii_scale();
    Ok((
        v,
        make_scaled_cm(&ScaledState {
            base: s.to_standard(),
            u1: v,
            u2: v,
        }),
    ))
}

/// Residuals (left − right) of the two equations that fix the form-II squeeze factors:
///
/// b1(v1² − 1)/(2b1 − v1) = b2(v2² − 1)/(2b2 − v2),
/// b1 b2 (v1² − 1)(v2² − 1) = (c v1 v2 − |d|)².
pub fn form_ii_residuals(b1: f64, b2: f64, c: f64, d: f64, v1: f64, v2: f64) -> Result<(f64, f64)> {
    if !(v1 > 0.0 && v2 > 0.0) {
        return Err(Error::DomainError(format!(
            "scale factors must be positive: ({v1}, {v2})"
        )));
    }
    let den1 = 2.0 * b1 - v1;
    let den2 = 2.0 * b2 - v2;
    if den1 == 0.0 {
        return Err(Error::SingularDenominator(1));
    }
    if den2 == 0.0 {
        return Err(Error::SingularDenominator(2));
    }
    let r_a = b1 * (v1 * v1 - 1.0) / den1 - b2 * (v2 * v2 - 1.0) / den2;
    let rhs = c * v1 * v2 - d.abs();
    let r_b = b1 * b2 * (v1 * v1 - 1.0) * (v2 * v2 - 1.0) - rhs * rhs;
    Ok((r_a, r_b))
}

/// Scaled standard covariance matrix:
///
/// ```text
/// [ b1 u1      0          c √(u1u2)   0          ]
/// [ 0          b1/u1      0           d/√(u1u2)  ]
/// [ c √(u1u2)  0          b2 u2       0          ]
/// [ 0          d/√(u1u2)  0           b2/u2      ]
/// ```
pub fn make_scaled_cm(sc: &ScaledState) -> TwoModeCM {
    let StandardFormI { b1, b2, c, d } = sc.base;
    let (u1, u2) = (sc.u1, sc.u2);
    let g = (u1 * u2).sqrt();
    #[rustfmt::skip]
    let m = Matrix4::new(
        b1 * u1, 0.0,     c * g,   0.0,
        0.0,     b1 / u1, 0.0,     d / g,
        c * g,   0.0,     b2 * u2, 0.0,
        0.0,     d / g,   0.0,     b2 / u2,
    );
    TwoModeCM::symmetrized(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::symplectic_spectrum;
    use approx::assert_abs_diff_eq;

    fn example() -> SymmetricState {
        SymmetricState::new(1.0, 0.8, 0.6).unwrap()
    }

    #[test]
    fn standard_is_fixed_point() {
        let red = to_standard_form_i(&example().to_cm()).unwrap();
        let f = red.form;
        assert_abs_diff_eq!(f.b1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.b2, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.c, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(f.d, -0.6, epsilon = 1e-12);
        assert!(!red.rank_one_cross);
    }

    #[test]
    fn scaling_does_not_change_standard_form() {
        let sc = ScaledState {
            base: example().to_standard(),
            u1: 2.0,
            u2: 0.5,
        };
        let f = to_standard_form_i(&make_scaled_cm(&sc)).unwrap().form;
        assert_abs_diff_eq!(f.c, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(f.d, -0.6, epsilon = 1e-12);
        assert_eq!(
            invariants(&make_scaled_cm(&sc)).det_c,
            invariants(&example().to_cm()).det_c
        );
    }

    #[test]
    fn rank_one_cross_block_flagged() {
        let v = TwoModeCM::from_rows([
            [1.0, 0.0, 0.3, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.3, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let red = to_standard_form_i(&v).unwrap();
        assert!(red.rank_one_cross);
        assert_eq!(red.form.d, 0.0);
        assert_abs_diff_eq!(red.form.c, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn form_ii_scale_examples() {
        let (v, vii) = form_ii_symmetric(&example()).unwrap();
        assert_abs_diff_eq!(v, 2f64.sqrt(), epsilon = 1e-15);
        let expect = make_scaled_cm(&ScaledState {
            base: example().to_standard(),
            u1: v,
            u2: v,
        });
        assert!((vii.matrix() - expect.matrix()).abs().max() <= 1e-14);

        let sts = symmetric_sts(0.4, 0.3);
        assert_abs_diff_eq!(form_ii_symmetric(&sts).unwrap().0, 1.0, epsilon = 1e-15);

        let thermal = SymmetricState::new(0.9, 0.0, 0.0).unwrap();
        let (v, vii) = form_ii_symmetric(&thermal).unwrap();
        assert_eq!(v, 1.0);
        let m = vii.matrix();
        assert_eq!(m, &Matrix4::from_diagonal(&m.diagonal()));
    }

    #[test]
    fn form_ii_residual_examples() {
        let s = example();
        let v = s.form_ii_scale();
        let (ra, rb) = form_ii_residuals(1.0, 1.0, 0.8, -0.6, v, v).unwrap();
        assert_abs_diff_eq!(ra, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rb, 0.0, epsilon = 1e-10);

        let (ra, rb) = form_ii_residuals(1.2, 1.2, 0.5, -0.5, 1.0, 1.0).unwrap();
        assert_eq!((ra, rb), (0.0, 0.0));

        let (ra, rb) = form_ii_residuals(1.0, 1.0, 0.8, -0.6, 1.0, 1.0).unwrap();
        assert_eq!(ra, 0.0);
        assert_abs_diff_eq!(rb, -(0.2f64 * 0.2), epsilon = 1e-15);

        assert!(matches!(
            form_ii_residuals(0.5, 1.0, 0.3, -0.1, 1.0, 1.2),
            Err(Error::SingularDenominator(1))
        ));
    }

    #[test]
    fn scaled_cm_identity_scaling() {
        let base = StandardFormI {
            b1: 1.1,
            b2: 0.9,
            c: 0.4,
            d: -0.2,
        };
        let cm = make_scaled_cm(&ScaledState { base, u1: 1.0, u2: 1.0 });
        assert_eq!(cm, base.to_cm());
        let scaled = make_scaled_cm(&ScaledState { base, u1: 1.7, u2: 0.6 });
        let (a, b) = (invariants(&cm), invariants(&scaled));
        assert_abs_diff_eq!(a.det_v1, b.det_v1, epsilon = 1e-14);
        assert_abs_diff_eq!(a.det_v2, b.det_v2, epsilon = 1e-14);
        assert_abs_diff_eq!(a.det_c, b.det_c, epsilon = 1e-14);
        assert_abs_diff_eq!(a.det_v, b.det_v, epsilon = 1e-14);
    }

    #[test]
    fn sts_examples() {
        let vac = symmetric_sts(0.0, 0.0);
        assert_eq!((vac.b, vac.c, vac.d_abs), (0.5, 0.0, 0.0));
        let tmsv = symmetric_sts(0.5, 0.0);
        let spec = symplectic_spectrum(&tmsv.to_cm()).unwrap();
        assert_abs_diff_eq!(spec.kappa_tilde_minus, (-1f64).exp() / 2.0, epsilon = 1e-12);
        let sts = symmetric_sts(0.3, 0.5);
        assert_abs_diff_eq!(sts.kappa_tilde_minus(), (-0.6f64).exp(), epsilon = 1e-14);
        assert!(sts.is_separable());
    }

    #[test]
    fn symmetric_state_validation() {
        assert!(SymmetricState::new(1.0, 0.5, 0.6).is_err());
        assert!(SymmetricState::new(0.8, 0.8, 0.1).is_err());
        assert!(SymmetricState::new(1.0, 0.6, 0.6).is_ok());
        let unphysical = SymmetricState::new(0.5, 0.4, 0.0).unwrap();
        assert!(!unphysical.is_physical());
        assert!(matches!(form_ii_symmetric(&unphysical), Err(Error::UnphysicalState(_))));
        let asym = StandardFormI {
            b1: 1.0,
            b2: 1.3,
            c: 0.2,
            d: -0.1,
        }
        .to_cm();
        assert!(matches!(SymmetricState::from_cm(&asym), Err(Error::NotSymmetric(_))));
        let back = SymmetricState::from_cm(&example().to_cm()).unwrap();
        assert_abs_diff_eq!(back.d_abs, 0.6, epsilon = 1e-12);
    }
}
