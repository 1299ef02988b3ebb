//! Gaussian gates on truncated number bases.
//!
//! Every gate matrix is the exact infinite-dimensional operator cropped to
//! the kept levels: squeezing via the recurrence for S|n⟩, the beam splitter
//! by exponentiating its generator inside each total-photon-number block.
//! Heisenberg action in (q, p) ordering is U†ξU = Sξ, so a CM maps to SVSᵀ.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{FockOperator, C64};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// exp[½(z̄a² − z a†²)] with z = r·e^{iφ}.
    Squeeze { mode: usize, r: f64, phi: f64 },
    /// exp(−iφ a†a).
    Rotate { mode: usize, phi: f64 },
    /// exp[−(θ/2)(e^{iφ} a1†a2 − e^{−iφ} a1 a2†)].
    BeamSplitter { theta: f64, phi: f64 },
}

/// Symplectic matrix of a gate on `modes` modes.
pub fn gate_symplectic(gate: &Gate, modes: usize) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    let rot = |phi: f64| {
        let (sn, cs) = phi.sin_cos();
        Matrix2::new(cs, sn, -sn, cs)
    };
    match *gate {
        Gate::Rotate { mode, phi } => s.view_mut((2 * mode, 2 * mode), (2, 2)).copy_from(&rot(phi)),
        Gate::Squeeze { mode, r, phi } => {
            let sq = Matrix2::new((-r).exp(), 0.0, 0.0, r.exp());
            let blk = rot(-0.5 * phi) * sq * rot(0.5 * phi);
            s.view_mut((2 * mode, 2 * mode), (2, 2)).copy_from(&blk);
        }
        Gate::BeamSplitter { theta, phi } => {
            let (sn, cs) = (0.5 * theta).sin_cos();
            let e = C64::from_polar(1.0, phi);
            let u = [[C64::from(cs), -e * sn], [e.conj() * sn, C64::from(cs)]];
            for (j, row) in u.iter().enumerate() {
                for (k, z) in row.iter().enumerate() {
                    s[(2 * j, 2 * k)] = z.re;
                    s[(2 * j, 2 * k + 1)] = -z.im;
                    s[(2 * j + 1, 2 * k)] = z.im;
                    s[(2 * j + 1, 2 * k + 1)] = z.re;
                }
            }
        }
    }
    s
}

/// ⟨m|S(r)|n⟩ for real r and m, n < dim.
///
/// Uses S a† = sech r·a†S + tanh r·S a, whose coefficients are below one,
/// so the recursion stays stable deep into the number basis.
fn squeeze_real(r: f64, dim: usize) -> DMatrix<f64> {
    let (sech, t) = (1.0 / r.cosh(), r.tanh());
    let mut out = DMatrix::zeros(dim, dim);
    out[(0, 0)] = sech.sqrt();
    for m in (2..dim).step_by(2) {
        out[(m, 0)] = out[(m - 2, 0)] * (-t) * (((m - 1) as f64) / m as f64).sqrt();
    }
    for n in 1..dim {
        let inv = 1.0 / (n as f64).sqrt();
        // parity is conserved, so only m + n even is nonzero
        for m in ((n % 2)..dim).step_by(2) {
            let diag = if m > 0 {
                (m as f64).sqrt() * sech * out[(m - 1, n - 1)]
            } else {
                0.0
            };
            let side = if n > 1 {
                ((n - 1) as f64).sqrt() * t * out[(m, n - 2)]
            } else {
                0.0
            };
            out[(m, n)] = inv * (diag + side);
        }
    }
    out
}

/// Cropped single-mode squeeze matrix for z = r·e^{iφ}.
pub(crate) fn squeeze_matrix(r: f64, phi: f64, dim: usize) -> DMatrix<C64> {
    let real = squeeze_real(r, dim);
    DMatrix::from_fn(dim, dim, |m, n| {
        C64::from_polar(real[(m, n)], 0.5 * phi * (m as f64 - n as f64))
    })
}

/// Beam-splitter matrix restricted to total photon number `total`, indexed
/// by the photon count of the first mode, before cropping.
pub(crate) fn bs_block(theta: f64, phi: f64, total: usize) -> DMatrix<C64> {
    let size = total + 1;
    let e = C64::from_polar(1.0, phi);
    // H = iG with G the anti-Hermitian generator
    let mut h = DMatrix::<C64>::zeros(size, size);
    for k in 0..total {
        let g = (((k + 1) * (total - k)) as f64).sqrt() * 0.5 * theta;
        h[(k + 1, k)] = C64::new(0.0, -1.0) * e * g;
        h[(k, k + 1)] = h[(k + 1, k)].conj();
    }
    let eig = SymmetricEigen::new(h);
    let mut v = eig.eigenvectors.clone();
    for (j, mut col) in v.column_iter_mut().enumerate() {
        col *= C64::from_polar(1.0, -eig.eigenvalues[j]);
    }
    v * eig.eigenvectors.adjoint()
}

enum ModeOp {
    Single { mode: usize, u: DMatrix<C64> },
    Pair { blocks: Vec<(Vec<usize>, DMatrix<C64>)> },
}

fn max_deviation(u: &DMatrix<C64>) -> f64 {
    let g = u.adjoint() * u;
    let n = g.nrows();
    (&g - DMatrix::<C64>::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

fn build(gate: &Gate, dim: usize, modes: usize) -> Result<(ModeOp, f64)> {
    let check_mode = |mode: usize| {
        if mode >= modes {
            Err(Error::DimensionMismatch(format!(
                "gate on mode {mode} of a {modes}-mode state"
            )))
        } else {
            Ok(())
        }
    };
    match *gate {
        Gate::Rotate { mode, phi } => {
            check_mode(mode)?;
            let u = DMatrix::from_fn(dim, dim, |m, n| {
                if m == n {
                    C64::from_polar(1.0, -phi * n as f64)
                } else {
                    C64::from(0.0)
                }
            });
            Ok((ModeOp::Single { mode, u }, 0.0))
        }
        Gate::Squeeze { mode, r, phi } => {
            check_mode(mode)?;
            let u = squeeze_matrix(r, phi, dim);
            let dev = max_deviation(&u);
            Ok((ModeOp::Single { mode, u }, dev))
        }
        Gate::BeamSplitter { theta, phi } => {
            if modes != 2 {
                return Err(Error::DimensionMismatch("beam splitter needs two modes".into()));
            }
            let mut blocks = Vec::with_capacity(2 * dim - 1);
            let mut dev: f64 = 0.0;
            for total in 0..=2 * (dim - 1) {
                let full = bs_block(theta, phi, total);
                let kept: Vec<usize> = (total.saturating_sub(dim - 1)..=total.min(dim - 1)).collect();
                let crop = DMatrix::from_fn(kept.len(), kept.len(), |a, b| full[(kept[a], kept[b])]);
                dev = dev.max(max_deviation(&crop));
                let index = kept.iter().map(|&k| k * dim + (total - k)).collect();
                blocks.push((index, crop));
            }
            Ok((ModeOp::Pair { blocks }, dev))
        }
    }
}

/// Applies the operator to every column of `x`.
fn apply_left(op: &ModeOp, x: &DMatrix<C64>, dim: usize, modes: usize) -> DMatrix<C64> {
    match op {
        ModeOp::Single { u, .. } if modes == 1 => u * x,
        ModeOp::Single { mode, u } => {
            let ut = u.transpose();
            let mut out = DMatrix::zeros(x.nrows(), x.ncols());
            for (j, col) in x.column_iter().enumerate() {
                // column-major view: element (n2, n1) sits at n1·N + n2
                let m = DMatrix::from_column_slice(dim, dim, col.as_slice());
                let y = if *mode == 0 { m * &ut } else { u * m };
                out.column_mut(j).copy_from_slice(y.as_slice());
            }
            out
        }
        ModeOp::Pair { blocks } => {
            let mut out = DMatrix::zeros(x.nrows(), x.ncols());
            for j in 0..x.ncols() {
                for (index, b) in blocks {
                    let v = DVector::from_iterator(index.len(), index.iter().map(|&i| x[(i, j)]));
                    let w = b * v;
                    for (a, &i) in index.iter().enumerate() {
                        out[(i, j)] = w[a];
                    }
                }
            }
            out
        }
    }
}

/// UρU† for a Gaussian gate.
pub fn apply_gate(state: &FockOperator, gate: &Gate) -> Result<FockOperator> {
    let (dim, modes) = (state.dim_per_mode, state.modes);
    let (op, dev) = build(gate, dim, modes)?;
    let mut out = match &state.spectral {
        Some(sp) => {
            let vectors = apply_left(&op, &sp.vectors, dim, modes);
            FockOperator::from_spectral(sp.weights.clone(), vectors, dim, modes)
        }
        None => {
            let half = apply_left(&op, state.matrix(), dim, modes);
            let full = apply_left(&op, &half.adjoint(), dim, modes);
            let full = (&full + full.adjoint()) * C64::from(0.5);
            FockOperator::from_matrix(full, dim, modes)?
        }
    };
    out.unitarity_deviation = state.unitarity_deviation.max(dev);
    Ok(out)
}

/// Applies gates in order, first element first.
pub fn apply_gates(state: &FockOperator, gates: &[Gate]) -> Result<FockOperator> {
    gates.iter().try_fold(state.clone(), |st, g| apply_gate(&st, g))
}
