//! Two-mode covariance matrices: symplectic spectra, physicality,
//! separability and partial transposition.

use std::path::Path;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance applied to κ thresholds in physicality and separability verdicts.
pub const KAPPA_TOL: f64 = 1e-12;

/// Symmetry tolerance used when loading a covariance matrix from outside.
pub const LOAD_SYMMETRY_TOL: f64 = 1e-9;

const PAIRING_TOL: f64 = 1e-10;

/// Covariance matrix of an undisplaced two-mode Gaussian state.
///
/// Rows and columns are ordered (q1, p1, q2, p2); the vacuum is ½·I.
/// The stored matrix is exactly symmetric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeCM(Matrix4<f64>);

impl TwoModeCM {
    /// Validates symmetry within [`LOAD_SYMMETRY_TOL`] and symmetrizes.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let asym = (m - m.transpose()).abs().max();
        if !asym.is_finite() || asym > LOAD_SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self::symmetrized(m))
    }

    /// Builds from the upper triangle mirrored, so the result is always symmetric.
    pub fn symmetrized(m: Matrix4<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|i, j| rows[i][j]))
    }

    pub fn vacuum() -> Self {
        Self(Matrix4::identity() * 0.5)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[(i, j)];
            }
        }
        out
    }

    pub fn blocks(&self) -> BlockDecomposition {
        let m = &self.0;
        BlockDecomposition {
            v1: m.fixed_view::<2, 2>(0, 0).into_owned(),
            v2: m.fixed_view::<2, 2>(2, 2).into_owned(),
            c: m.fixed_view::<2, 2>(0, 2).into_owned(),
        }
    }

    /// Congruence SᵀVS.
    pub fn congruence(&self, s: &Matrix4<f64>) -> Self {
        Self::symmetrized(s.transpose() * self.0 * s)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: CmFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.v
            .iter()
            .flatten()
            .all(|x| x.is_finite())
            .then_some(())
            .ok_or_else(|| Error::Parse("v: non-finite entry".into()))?;
        Self::from_rows(file.v)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&CmFile { v: self.rows() }).expect("finite matrix serializes")
    }
}

/// On-disk form: `{"v": [[..4..], ..4 rows..]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmFile {
    pub v: [[f64; 4]; 4],
}

/// V = [[V1, C], [Cᵀ, V2]].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockDecomposition {
    pub v1: Matrix2<f64>,
    pub v2: Matrix2<f64>,
    pub c: Matrix2<f64>,
}

impl BlockDecomposition {
    pub fn assemble(&self) -> TwoModeCM {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.v1);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.v2);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&self.c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&self.c.transpose());
        TwoModeCM(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub kappa_tilde_plus: f64,
    pub kappa_tilde_minus: f64,
}

/// Local symplectic invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariants4 {
    pub det_v1: f64,
    pub det_v2: f64,
    pub det_c: f64,
    pub det_v: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhysicalityVerdict {
    pub physical: bool,
    /// NaN when the spectrum could not be computed (e.g. V not positive definite).
    pub kappa_minus: f64,
    /// det(V + iΩ/2) written through the block invariants.
    pub uncertainty_det: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    pub kappa_tilde_minus: f64,
}

/// Ω = J ⊕ J with J = [[0, 1], [-1, 0]].
pub fn omega() -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m[(0, 1)] = 1.0;
    m[(1, 0)] = -1.0;
    m[(2, 3)] = 1.0;
    m[(3, 2)] = -1.0;
    m
}

/// Λ = diag(1, 1, 1, -1): mirror of the second mode's momentum.
pub fn pt_mirror() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0))
}

pub fn partial_transpose(v: &TwoModeCM) -> TwoModeCM {
    v.congruence(&pt_mirror())
}

/// Moduli of the ±iκ eigenvalue pairs of ΩV, largest first.
fn kappa_pair(v: &Matrix4<f64>) -> Result<(f64, f64)> {
    let eig = SymmetricEigen::new(*v).eigenvalues;
    let min_eig = eig.min();
    if !(min_eig > 0.0) {
        return Err(Error::NonPositiveDefinite(min_eig));
    }
    let scale = eig.max().max(1.0);
    let ev = (omega() * v).complex_eigenvalues();
    let mut im: Vec<f64> = ev.iter().map(|z| z.im).collect();
    let max_re = ev.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    im.sort_by(|a, b| a.total_cmp(b));
    // sorted: -κ₊, -κ₋, κ₋, κ₊
    let pair_dev = (im[0] + im[3]).abs().max((im[1] + im[2]).abs());
    let dev = max_re.max(pair_dev);
    if dev > PAIRING_TOL * scale || im[2] <= 0.0 {
        return Err(Error::NumericalDegeneracy(dev));
    }
    Ok((0.5 * (im[3] - im[0]), 0.5 * (im[2] - im[1])))
}

/// Symplectic eigenvalues of V and of its partial transpose, from a dense
/// eigensolve of ΩV.
pub fn symplectic_spectrum(v: &TwoModeCM) -> Result<SymplecticSpectrum> {
    let (kappa_plus, kappa_minus) = kappa_pair(v.matrix())?;
    let (kappa_tilde_plus, kappa_tilde_minus) = kappa_pair(partial_transpose(v).matrix())?;
    Ok(SymplecticSpectrum {
        kappa_plus,
        kappa_minus,
        kappa_tilde_plus,
        kappa_tilde_minus,
    })
}

pub fn invariants(v: &TwoModeCM) -> Invariants4 {
    let b = v.blocks();
    Invariants4 {
        det_v1: b.v1.determinant(),
        det_v2: b.v2.determinant(),
        det_c: b.c.determinant(),
        det_v: v.matrix().determinant(),
    }
}

/// det(V + iΩ/2) = detV - (detV1 + detV2 + 2 detC)/4 + 1/16.
pub fn uncertainty_determinant(inv: &Invariants4) -> f64 {
    inv.det_v - 0.25 * (inv.det_v1 + inv.det_v2 + 2.0 * inv.det_c) + 1.0 / 16.0
}

pub fn is_physical(v: &TwoModeCM) -> PhysicalityVerdict {
    let uncertainty_det = uncertainty_determinant(&invariants(v));
    match kappa_pair(v.matrix()) {
        Ok((_, kappa_minus)) => PhysicalityVerdict {
            physical: kappa_minus >= 0.5 - KAPPA_TOL,
            kappa_minus,
            uncertainty_det,
        },
        Err(_) => PhysicalityVerdict {
            physical: false,
            kappa_minus: f64::NAN,
            uncertainty_det,
        },
    }
}

/// PPT test: separable iff κ̃₋ ≥ 1/2.
pub fn is_separable(v: &TwoModeCM) -> Result<SeparabilityVerdict> {
    let phys = is_physical(v);
    if !phys.physical {
        return Err(Error::UnphysicalState(phys.kappa_minus));
    }
    let (_, kappa_tilde_minus) = kappa_pair(partial_transpose(v).matrix())?;
    Ok(SeparabilityVerdict {
        separable: kappa_tilde_minus >= 0.5 - KAPPA_TOL,
        kappa_tilde_minus,
    })
}
