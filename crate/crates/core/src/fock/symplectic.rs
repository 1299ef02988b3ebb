//! Williamson and Bloch–Messiah decompositions, and the gate sequence that
//! prepares a Gaussian state from a thermal product.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::gates::{apply_gates, Gate};
use super::{tensor, thermal_state, FockOperator, C64};
use crate::cm::TwoModeCM;
use crate::error::{Error, Result};
use crate::one_mode::OneModeCM;

const DECOMPOSITION_TOL: f64 = 1e-7;
/// Symplectic eigenvalues this far below ½ are clamped to the vacuum.
const NU_SLACK: f64 = 1e-10;
/// One-mode states are built on this many times the requested levels and
/// then cropped, so high number states squeezed down into the kept levels
/// are not lost from ρ.
const ONE_MODE_OVERSAMPLE: usize = 2;

/// Block-diagonal Ω for `modes` modes.
pub fn omega_n(modes: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        o[(2 * j, 2 * j + 1)] = 1.0;
        o[(2 * j + 1, 2 * j)] = -1.0;
    }
    o
}

fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let o = omega_n(s.nrows() / 2);
    (s.transpose() * &o * s - o).abs().max()
}

/// V = S·diag(κ₁, κ₁, κ₂, κ₂)·Sᵀ with κ₁ ≥ κ₂.
#[derive(Clone, Debug)]
pub struct WilliamsonFactors {
    pub s: DMatrix<f64>,
    pub kappas: Vec<f64>,
}

impl WilliamsonFactors {
    pub fn diagonal(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            2 * self.kappas.len(),
            self.kappas.iter().flat_map(|&k| [k, k]),
        ))
    }
}

fn sym_power(v: &DMatrix<f64>, p: f64) -> Result<DMatrix<f64>> {
    let e = SymmetricEigen::new(v.clone());
    let lo = e.eigenvalues.min();
    if !(lo > 0.0) {
        return Err(Error::NonPositiveDefinite(lo));
    }
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|x| x.powf(p)));
    Ok(&e.eigenvectors * d * e.eigenvectors.transpose())
}

pub fn williamson(v: &DMatrix<f64>) -> Result<WilliamsonFactors> {
    let dim = v.nrows();
    if !dim.is_multiple_of(2) || v.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "{}×{} covariance matrix",
            v.nrows(),
            v.ncols()
        )));
    }
    let modes = dim / 2;
    let half = sym_power(v, 0.5)?;
    let inv_half = sym_power(v, -0.5)?;
    let a = &inv_half * omega_n(modes) * &inv_half;
    let h = a.map(|x| C64::new(0.0, x));
    let eig = SymmetricEigen::new(h);
    let mut positive: Vec<(f64, usize)> = (0..dim)
        .filter(|&i| eig.eigenvalues[i] > 0.0)
        .map(|i| (eig.eigenvalues[i], i))
        .collect();
    if positive.len() != modes {
        return Err(Error::DecompositionFailure(f64::NAN));
    }
    // ascending 1/κ puts the largest symplectic eigenvalue first
    positive.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut o = DMatrix::zeros(dim, dim);
    let mut kappas = Vec::with_capacity(modes);
    for (j, &(lam, i)) in positive.iter().enumerate() {
        let w = eig.eigenvectors.column(i);
        let root2 = std::f64::consts::SQRT_2;
        o.set_column(2 * j, &w.map(|z| root2 * z.im));
        o.set_column(2 * j + 1, &w.map(|z| root2 * z.re));
        let mut kappa = 1.0 / lam;
        if kappa < 0.5 - NU_SLACK {
            return Err(Error::UnphysicalState(kappa));
        }
        kappa = kappa.max(0.5);
        kappas.push(kappa);
    }
    let d_inv_half = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        positive.iter().flat_map(|&(lam, _)| {
            let r = lam.sqrt();
            [r, r]
        }),
    ));
    let mut s = &half * &o * &d_inv_half;
    // fix the orientation of each pair
    let o_n = omega_n(modes);
    let form = s.transpose() * &o_n * &s;
    for j in 0..modes {
        if form[(2 * j, 2 * j + 1)] < 0.0 {
            let flipped = -s.column(2 * j + 1);
            s.set_column(2 * j + 1, &flipped);
        }
    }
    let defect = symplectic_defect(&s);
    if defect > DECOMPOSITION_TOL {
        return Err(Error::DecompositionFailure(defect));
    }
    Ok(WilliamsonFactors { s, kappas })
}

/// S = K₁·Z·K₂ with K orthogonal symplectic and Z = ⊕ diag(zⱼ, 1/zⱼ), zⱼ ≥ 1.
#[derive(Clone, Debug)]
pub struct EulerFactors {
    pub k1: DMatrix<f64>,
    pub z: Vec<f64>,
    pub k2: DMatrix<f64>,
}

pub fn bloch_messiah(s: &DMatrix<f64>) -> Result<EulerFactors> {
    let dim = s.nrows();
    let modes = dim / 2;
    let defect = symplectic_defect(s);
    if defect > DECOMPOSITION_TOL {
        return Err(Error::NotSymplectic(defect));
    }
    let p = s.transpose() * s;
    let eig = SymmetricEigen::new(p.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let omega_t = omega_n(modes).transpose();
    let mut o = DMatrix::<f64>::zeros(dim, dim);
    let mut z = Vec::with_capacity(modes);
    let mut built = 0;
    for &i in &order {
        if built == modes {
            break;
        }
        let mut e: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        // symplectic Gram–Schmidt against the pairs already placed
        for j in 0..built {
            let (ej, fj) = (o.column(2 * j).into_owned(), o.column(2 * j + 1).into_owned());
            let w_f = e.dot(&(omega_n(modes) * &fj));
            let w_e = e.dot(&(omega_n(modes) * &ej));
            e -= ej * w_f;
            e += fj * w_e;
        }
        let norm = e.norm();
        if norm < 0.5 {
            continue;
        }
        e /= norm;
        let f = &omega_t * &e;
        z.push(e.dot(&(&p * &e)).max(1.0).sqrt());
        o.set_column(2 * built, &e);
        o.set_column(2 * built + 1, &f);
        built += 1;
    }
    if built != modes {
        return Err(Error::DecompositionFailure(f64::NAN));
    }
    let z_inv = DMatrix::from_diagonal(&DVector::from_iterator(dim, z.iter().flat_map(|&x| [1.0 / x, x])));
    let k1 = s * &o * z_inv;
    let orth = (k1.transpose() * &k1 - DMatrix::identity(dim, dim)).abs().max();
    let defect = orth.max(symplectic_defect(&k1)).max(symplectic_defect(&o));
    if defect > DECOMPOSITION_TOL {
        return Err(Error::DecompositionFailure(defect));
    }
    Ok(EulerFactors {
        k1,
        z,
        k2: o.transpose(),
    })
}

/// uⱼₖ = K[2j, 2k] + i·K[2j+1, 2k] for an orthogonal symplectic K.
pub fn passive_to_unitary(k: &DMatrix<f64>) -> DMatrix<C64> {
    let modes = k.nrows() / 2;
    DMatrix::from_fn(modes, modes, |j, l| C64::new(k[(2 * j, 2 * l)], k[(2 * j + 1, 2 * l)]))
}

/// Rotations and a real beam splitter realizing a passive K, in application order.
pub fn passive_gates(k: &DMatrix<f64>) -> Result<Vec<Gate>> {
    let u = passive_to_unitary(k);
    let rotate = |mode, psi: f64| Gate::Rotate { mode, phi: -psi };
    match u.nrows() {
        1 => Ok(vec![rotate(0, u[(0, 0)].arg())]),
        2 => {
            let (al, be, ga, de) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
            let (c, s) = (al.norm(), ga.norm());
            // u = diag(e^{iφ1}, e^{iφ2}) · [[c, −s], [s, c]] · diag(1, e^{iψ})
            let (phi1, phi2, psi) = if c < 1e-12 {
                ((-be).arg(), ga.arg(), 0.0)
            } else if s < 1e-12 {
                (al.arg(), de.arg(), 0.0)
            } else {
                (al.arg(), ga.arg(), (-be).arg() - al.arg())
            };
            let rebuilt = [
                C64::from_polar(c, phi1),
                -C64::from_polar(s, phi1 + psi),
                C64::from_polar(s, phi2),
                C64::from_polar(c, phi2 + psi),
            ];
            let err = [al, be, ga, de]
                .iter()
                .zip(rebuilt)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            if err > 1e-9 {
                return Err(Error::DecompositionFailure(err));
            }
            Ok(vec![
                rotate(1, psi),
                Gate::BeamSplitter {
                    theta: 2.0 * s.atan2(c),
                    phi: 0.0,
                },
                rotate(0, phi1),
                rotate(1, phi2),
            ])
        }
        n => Err(Error::DimensionMismatch(format!("{n}-mode passive transformation"))),
    }
}

/// Gates realizing U with U†ξU = Sξ, in application order.
pub fn gaussian_unitary_gates(s: &DMatrix<f64>) -> Result<Vec<Gate>> {
    let f = bloch_messiah(s)?;
    let mut gates = passive_gates(&f.k2)?;
    for (mode, &z) in f.z.iter().enumerate() {
        if z > 1.0 {
            gates.push(Gate::Squeeze {
                mode,
                r: -z.ln(),
                phi: 0.0,
            });
        }
    }
    gates.extend(passive_gates(&f.k1)?);
    Ok(gates)
}

/// Truncated density matrix of the zero-mean Gaussian state with CM `v`
/// (2×2 or 4×4): thermal product, then the gates of its Williamson factor.
pub fn gaussian_state(v: &DMatrix<f64>, n: usize) -> Result<FockOperator> {
    let w = williamson(v)?;
    let levels = if w.kappas.len() == 1 {
        ONE_MODE_OVERSAMPLE * n
    } else {
        n
    };
    let thermals = w
        .kappas
        .iter()
        .map(|&k| thermal_state(k, levels))
        .collect::<Result<Vec<_>>>()?;
    let base = match thermals.as_slice() {
        [one] => one.clone(),
        [a, b] => tensor(a, b)?,
        _ => return Err(Error::DimensionMismatch(format!("{} modes", thermals.len()))),
    };
    let gates = gaussian_unitary_gates(&w.s)?;
    log::debug!("gaussian state: κ = {:?}, {} gates", w.kappas, gates.len());
    let out = apply_gates(&base, &gates)?;
    Ok(if levels == n { out } else { out.crop(n) })
}

pub fn gaussian_state_from_cm(v: &TwoModeCM, n: usize) -> Result<FockOperator> {
    let m = v.matrix();
    gaussian_state(&DMatrix::from_fn(4, 4, |i, j| m[(i, j)]), n)
}

pub fn gaussian_state_one_mode(v: &OneModeCM, n: usize) -> Result<FockOperator> {
    gaussian_state(
        &DMatrix::from_diagonal(&DVector::from_vec(vec![v.sigma_qq, v.sigma_pp])),
        n,
    )
}
