use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, Matrix4};

use super::*;
use crate::bures::one_mode_fidelity;
use crate::cm::TwoModeCM;
use crate::one_mode::OneModeCM;
use crate::relent::{entropy_of_nu, rel_entropy_one_mode};
use crate::standard_forms::{symmetric_sts, SymmetricState};

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

fn two_mode(v: &TwoModeCM) -> DMatrix<f64> {
    let m = v.matrix();
    DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
}

#[test]
fn thermal_weights_and_deficit() {
    let vac = thermal_state(0.5, 10).unwrap();
    assert_eq!(vac.trace_deficit, 0.0);
    assert_eq!(vac.matrix()[(0, 0)].re, 1.0);
    assert_eq!(vac.purity(), 1.0);
    let th = thermal_state(1.0, 60).unwrap();
    assert!(th.trace_deficit < 1e-10);
    assert_abs_diff_eq!(th.matrix()[(1, 1)].re, 2.0 / 9.0, epsilon = 1e-16);
    assert!(thermal_state(0.4, 10).is_err());
    assert!(thermal_state(1.0, 1).is_err());
}

#[test]
fn thermal_and_vacuum_moments() {
    let vac = moments_from_fock(&thermal_state(0.5, 5).unwrap()).unwrap();
    assert_eq!(vac, DMatrix::identity(2, 2) * 0.5);
    let th = moments_from_fock(&thermal_state(1.0, 60).unwrap()).unwrap();
    assert!(max_abs_diff(&th, &DMatrix::identity(2, 2)) < 1e-9);
    let short = thermal_state(3.0, 10).unwrap();
    assert!(matches!(moments_from_fock(&short), Err(Error::TruncationWarning(_))));
}

#[test]
fn squeeze_matrix_is_exact_on_low_levels() {
    let r = 1.0;
    let big = 300;
    let fwd = gates::squeeze_matrix(r, 0.3, big);
    let back = gates::squeeze_matrix(-r, 0.3, big);
    let prod = &back * &fwd;
    for m in 0..20 {
        for n in 0..20 {
            let want = if m == n { 1.0 } else { 0.0 };
            assert!(
                (prod[(m, n)] - C64::from(want)).norm() < 1e-12,
                "({m}, {n}) {}",
                prod[(m, n)]
            );
        }
    }
    // ⟨2|S(r)|0⟩ = −tanh r / √(2 cosh r)
    let s = gates::squeeze_matrix(0.4, 0.0, 6);
    assert_abs_diff_eq!(
        s[(2, 0)].re,
        -(0.4f64).tanh() / (2.0 * 0.4f64.cosh()).sqrt(),
        epsilon = 1e-15
    );
}

#[test]
fn squeeze_then_unsqueeze_restores_state() {
    let st = gaussian_state_one_mode(&OneModeCM::new(1.1, 0.9).unwrap(), 40).unwrap();
    let there = apply_gate(
        &st,
        &Gate::Squeeze {
            mode: 0,
            r: 0.3,
            phi: 0.7,
        },
    )
    .unwrap();
    let back = apply_gate(
        &there,
        &Gate::Squeeze {
            mode: 0,
            r: -0.3,
            phi: 0.7,
        },
    )
    .unwrap();
    let diff = (back.matrix() - st.matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(diff < 1e-9, "{diff}");
}

#[test]
fn squeezed_vacuum_moments() {
    let r = 0.45;
    let st = apply_gate(
        &thermal_state(0.5, 60).unwrap(),
        &Gate::Squeeze { mode: 0, r, phi: 0.0 },
    )
    .unwrap();
    let cm = moments_from_fock(&st).unwrap();
    assert_abs_diff_eq!(cm[(0, 0)], (-2.0 * r).exp() / 2.0, epsilon = 1e-10);
    assert_abs_diff_eq!(cm[(1, 1)], (2.0 * r).exp() / 2.0, epsilon = 1e-10);
    assert_abs_diff_eq!(cm[(0, 1)], 0.0, epsilon = 1e-12);
}

#[test]
fn gates_act_like_their_symplectic_matrices() {
    let base = SymmetricState::new(0.9, 0.3, 0.2).unwrap().to_cm();
    let v = two_mode(&base);
    let n = 24;
    let st = gaussian_state(&v, n).unwrap();
    let cases = [
        Gate::Rotate { mode: 0, phi: 0.4 },
        Gate::Rotate { mode: 1, phi: -1.1 },
        Gate::Squeeze {
            mode: 0,
            r: 0.2,
            phi: 0.5,
        },
        Gate::Squeeze {
            mode: 1,
            r: -0.15,
            phi: 0.0,
        },
        Gate::BeamSplitter { theta: 0.9, phi: 0.6 },
        Gate::BeamSplitter {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        },
    ];
    for g in cases {
        let out = apply_gate(&st, &g).unwrap();
        let s = gate_symplectic(&g, 2);
        let want = &s * &v * s.transpose();
        let got = moments_unchecked(&out);
        assert!(max_abs_diff(&got, &want) < 1e-6, "{g:?}: {}", max_abs_diff(&got, &want));
    }
}

#[test]
fn zero_angle_beam_splitter_is_identity() {
    let st = gaussian_state_from_cm(&SymmetricState::new(1.0, 0.8, 0.6).unwrap().to_cm(), 12).unwrap();
    let out = apply_gate(&st, &Gate::BeamSplitter { theta: 0.0, phi: 0.3 }).unwrap();
    let diff = (out.matrix() - st.matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(diff < 1e-12);
    let one = thermal_state(1.0, 5).unwrap();
    assert!(matches!(
        apply_gate(&one, &Gate::BeamSplitter { theta: 1.0, phi: 0.0 }),
        Err(Error::DimensionMismatch(_))
    ));
    assert!(apply_gate(&one, &Gate::Rotate { mode: 1, phi: 0.0 }).is_err());
}

#[test]
fn balanced_splitter_separates_two_mode_squeezed_vacuum() {
    let tmsv = symmetric_sts(0.2, 0.0).to_cm();
    let st = gaussian_state_from_cm(&tmsv, 25).unwrap();
    let out = apply_gate(
        &st,
        &Gate::BeamSplitter {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        },
    )
    .unwrap();
    let cm = moments_from_fock(&out).unwrap();
    for i in 0..2 {
        for j in 2..4 {
            assert!(cm[(i, j)].abs() < 1e-6);
        }
    }
    assert_abs_diff_eq!(cm[(0, 0)] * cm[(1, 1)], 0.25, epsilon = 1e-6);
    assert_abs_diff_eq!(cm[(2, 2)] * cm[(3, 3)], 0.25, epsilon = 1e-6);
}

#[test]
fn williamson_reconstructs() {
    let v = two_mode(&SymmetricState::new(1.0, 0.8, 0.6).unwrap().to_cm());
    let w = williamson(&v).unwrap();
    let back = &w.s * w.diagonal() * w.s.transpose();
    assert!(max_abs_diff(&back, &v) < 1e-9);
    let o = omega_n(2);
    assert!(max_abs_diff(&(w.s.transpose() * &o * &w.s), &o) < 1e-9);
    assert!(w.kappas[0] >= w.kappas[1]);
    let th = williamson(&(DMatrix::identity(2, 2) * 0.8)).unwrap();
    assert_abs_diff_eq!(th.kappas[0], 0.8, epsilon = 1e-14);
    let bad = DMatrix::identity(2, 2) * 0.3;
    assert!(matches!(williamson(&bad), Err(Error::UnphysicalState(_))));
}

#[test]
fn bloch_messiah_reconstructs() {
    let v = two_mode(
        &crate::cm::TwoModeCM::new(Matrix4::new(
            1.3, 0.2, 0.5, -0.1, 0.2, 0.9, 0.05, -0.4, 0.5, 0.05, 1.1, 0.1, -0.1, -0.4, 0.1, 1.2,
        ))
        .unwrap(),
    );
    let s = williamson(&v).unwrap().s;
    let f = bloch_messiah(&s).unwrap();
    let zd = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        f.z.iter().flat_map(|&z| [z, 1.0 / z]),
    ));
    assert!(max_abs_diff(&(&f.k1 * zd * &f.k2), &s) < 1e-9);
    let gates = gaussian_unitary_gates(&s).unwrap();
    let composed = gates
        .iter()
        .fold(DMatrix::identity(4, 4), |acc, g| gate_symplectic(g, 2) * acc);
    assert!(max_abs_diff(&composed, &s) < 1e-9);
    let orth = bloch_messiah(&DMatrix::identity(4, 4)).unwrap();
    assert_eq!(orth.z, vec![1.0, 1.0]);
}

#[test]
fn example_state_round_trip() {
    let cm = crate::standard_forms::StandardFormI {
        b1: 1.0,
        b2: 1.0,
        c: 0.8,
        d: -0.6,
    }
    .to_cm();
    let st = gaussian_state_from_cm(&cm, 30).unwrap();
    let back = moments_from_fock(&st).unwrap();
    assert!(max_abs_diff(&back, &two_mode(&cm)) < 1e-5);
}

#[test]
fn two_mode_squeezed_vacuum_is_pure() {
    let st = gaussian_state_from_cm(&symmetric_sts(0.4, 0.0).to_cm(), 30).unwrap();
    assert_abs_diff_eq!(st.purity(), 1.0, epsilon = 1e-6);
    assert!(entropy_fock(&st) < 1e-6);
}

#[test]
fn fidelity_examples() {
    let a = gaussian_state_one_mode(&OneModeCM::new(1.3, 0.6).unwrap(), 60).unwrap();
    assert_abs_diff_eq!(fidelity_fock(&a, &a).unwrap(), 1.0, epsilon = 1e-10);
    let vac = thermal_state(0.5, 60).unwrap();
    let th = thermal_state(1.0, 60).unwrap();
    assert_abs_diff_eq!(fidelity_fock(&vac, &th).unwrap(), 2.0 / 3.0, epsilon = 1e-8);
    // pure squeezed vacua: |⟨0|S(−r1)S(r2)|0⟩|² = 1/cosh(r2 − r1)
    let s1 = apply_gate(
        &vac,
        &Gate::Squeeze {
            mode: 0,
            r: 0.2,
            phi: 0.0,
        },
    )
    .unwrap();
    let s2 = apply_gate(
        &vac,
        &Gate::Squeeze {
            mode: 0,
            r: 0.7,
            phi: 0.0,
        },
    )
    .unwrap();
    assert_abs_diff_eq!(fidelity_fock(&s1, &s2).unwrap(), 1.0 / 0.5f64.cosh(), epsilon = 1e-9);
    // the dense route agrees
    let d1 = FockOperator::from_matrix(s1.matrix().clone(), 60, 1).unwrap();
    assert_abs_diff_eq!(fidelity_fock(&d1, &s2).unwrap(), 1.0 / 0.5f64.cosh(), epsilon = 1e-7);
    assert!(matches!(
        fidelity_fock(&vac, &thermal_state(1.0, 30).unwrap()),
        Err(Error::DimensionMismatch(_))
    ));
}

#[test]
fn one_mode_fidelity_formula_matches_oracle() {
    let pairs = [
        ((1.0, 1.0), (0.5, 0.5)),
        ((1.3, 0.6), (0.8, 0.9)),
        ((std::f64::consts::E / 2.0, 0.5 / std::f64::consts::E), (0.5, 0.5)),
        ((0.7, 0.9), (1.2, 1.4)),
    ];
    for ((a, b), (c, d)) in pairs {
        let (v, w) = (OneModeCM::new(a, b).unwrap(), OneModeCM::new(c, d).unwrap());
        let fock = fidelity_fock(
            &gaussian_state_one_mode(&v, 60).unwrap(),
            &gaussian_state_one_mode(&w, 60).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(one_mode_fidelity(&v, &w).unwrap(), fock, epsilon = 1e-8);
    }
}

#[test]
fn relative_entropy_examples() {
    let a = thermal_state(0.6, 60).unwrap();
    let b = thermal_state(1.0, 60).unwrap();
    assert_eq!(rel_entropy_fock(&a, &a).unwrap(), 0.0);
    let closed = rel_entropy_one_mode(&OneModeCM::thermal(0.6), &OneModeCM::thermal(1.0)).unwrap();
    assert_abs_diff_eq!(rel_entropy_fock(&a, &b).unwrap(), closed, epsilon = 1e-7);
    let vac = thermal_state(0.5, 60).unwrap();
    assert!(matches!(rel_entropy_fock(&vac, &b), Err(Error::SupportViolation(_))));
    assert_abs_diff_eq!(rel_entropy_fock(&b, &vac).unwrap(), 1.5f64.ln(), epsilon = 1e-12);
}

#[test]
fn entropy_examples() {
    assert!(entropy_fock(&thermal_state(0.5, 20).unwrap()).abs() < 1e-9);
    assert_abs_diff_eq!(
        entropy_fock(&thermal_state(1.0, 60).unwrap()),
        0.954_771_252_442_219_2,
        epsilon = 1e-9
    );
    let sq = apply_gate(
        &thermal_state(0.9, 80).unwrap(),
        &Gate::Squeeze {
            mode: 0,
            r: 0.5,
            phi: 1.0,
        },
    )
    .unwrap();
    assert_abs_diff_eq!(entropy_fock(&sq), entropy_of_nu(0.9), epsilon = 1e-7);
}

#[test]
fn product_rules_and_common_unitary() {
    let n = 20;
    let one = |q: f64, p: f64| gaussian_state_one_mode(&OneModeCM::new(q, p).unwrap(), n).unwrap();
    let (r1, r2, s1, s2) = (one(0.7, 0.6), one(0.9, 0.65), one(0.8, 0.8), one(0.6, 0.9));
    let rho = tensor(&r1, &r2).unwrap();
    let sigma = tensor(&s1, &s2).unwrap();
    let f = fidelity_fock(&rho, &sigma).unwrap();
    let f_parts = fidelity_fock(&r1, &s1).unwrap() * fidelity_fock(&r2, &s2).unwrap();
    assert_abs_diff_eq!(f, f_parts, epsilon = 1e-7);
    let s = rel_entropy_fock(&sigma, &rho).unwrap();
    let s_parts = rel_entropy_fock(&s1, &r1).unwrap() + rel_entropy_fock(&s2, &r2).unwrap();
    assert_abs_diff_eq!(s, s_parts, epsilon = 1e-7);
    let bs = Gate::BeamSplitter { theta: 1.1, phi: 0.4 };
    let (rho_u, sigma_u) = (apply_gate(&rho, &bs).unwrap(), apply_gate(&sigma, &bs).unwrap());
    assert_abs_diff_eq!(fidelity_fock(&rho_u, &sigma_u).unwrap(), f, epsilon = 1e-6);
    assert_abs_diff_eq!(rel_entropy_fock(&sigma_u, &rho_u).unwrap(), s, epsilon = 1e-6);
}

#[test]
fn truncation_convergence() {
    let v = OneModeCM::new(1.2, 0.7).unwrap();
    let w = OneModeCM::new(0.8, 1.0).unwrap();
    let at = |n| {
        let (a, b) = (
            gaussian_state_one_mode(&v, n).unwrap(),
            gaussian_state_one_mode(&w, n).unwrap(),
        );
        (
            fidelity_fock(&a, &b).unwrap(),
            rel_entropy_fock(&b, &a).unwrap(),
            entropy_fock(&a),
        )
    };
    let (f1, s1, e1) = at(40);
    let (f2, s2, e2) = at(80);
    assert!((f1 - f2).abs() < 1e-8);
    assert!((s1 - s2).abs() < 1e-7);
    assert!((e1 - e2).abs() < 1e-7);
}
