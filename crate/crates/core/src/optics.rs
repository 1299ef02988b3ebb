//! Beam-splitter symplectic maps and diagonalization of symmetric scaled states.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::cm::{omega, TwoModeCM};
use crate::error::{Error, Result};
use crate::standard_forms::SymmetricState;

const SYMPLECTIC_TOL: f64 = 1e-8;

/// Mixing angle θ ∈ [0, π] and phase φ ∈ (-π, π].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterParams {
    pub theta: f64,
    pub phi: f64,
}

impl BeamSplitterParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::DomainError(format!("θ = {theta} outside [0, π]")));
        }
        if !(phi > -PI && phi <= PI) {
            return Err(Error::DomainError(format!("φ = {phi} outside (-π, π]")));
        }
        Ok(Self { theta, phi })
    }

    /// θ = π/2, φ = 0.
    pub fn balanced() -> Self {
        Self {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }
}

fn rotation(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Orthogonal symplectic matrix M(θ, φ) acting on CMs as MᵀVM.
///
/// M = [[cos(θ/2) I, -sin(θ/2) I], [sin(θ/2) I, cos(θ/2) I]] · (I ⊕ R(φ)).
/// At θ = π/2, φ = 0 the first output mode carries V1 + C.
pub fn bs_symplectic(p: &BeamSplitterParams) -> Matrix4<f64> {
    let (s, c) = (0.5 * p.theta).sin_cos();
    let i2 = Matrix2::<f64>::identity();
    let mut mix = Matrix4::zeros();
    mix.fixed_view_mut::<2, 2>(0, 0).copy_from(&(i2 * c));
    mix.fixed_view_mut::<2, 2>(0, 2).copy_from(&(i2 * -s));
    mix.fixed_view_mut::<2, 2>(2, 0).copy_from(&(i2 * s));
    mix.fixed_view_mut::<2, 2>(2, 2).copy_from(&(i2 * c));
    let mut phase = Matrix4::identity();
    phase.fixed_view_mut::<2, 2>(2, 2).copy_from(&rotation(p.phi));
    mix * phase
}

/// Largest entry of |MᵀΩM − Ω|.
pub fn symplectic_deviation(m: &Matrix4<f64>) -> f64 {
    let o = omega();
    (m.transpose() * o * m - o).abs().max()
}

/// MᵀVM after checking that M is symplectic.
pub fn transform_cm(v: &TwoModeCM, m: &Matrix4<f64>) -> Result<TwoModeCM> {
    let dev = symplectic_deviation(m);
    if !(dev <= SYMPLECTIC_TOL) {
        return Err(Error::NotSymplectic(dev));
    }
    Ok(v.congruence(m))
}

/// Diagonal of the balanced beam-splitter image of a symmetric state scaled by u
/// on both modes: [(b+c)u, (b−|d|)/u, (b−c)u, (b+|d|)/u].
pub fn diagonalize_symmetric(s: &SymmetricState, u: f64) -> Result<[f64; 4]> {
    if !(u > 0.0) {
        return Err(Error::DomainError(format!("scale u = {u} must be positive")));
    }
    s.ensure_physical()?;
    Ok([
        (s.b + s.c) * u,
        (s.b - s.d_abs) / u,
        (s.b - s.c) * u,
        (s.b + s.d_abs) / u,
    ])
}
