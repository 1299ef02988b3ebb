//! Brute-force Gaussian states as density matrices in a truncated number basis.
//!
//! Two-mode basis states |n1, n2⟩ are stored at index n1·N + n2. States are
//! never renormalized after truncation; the lost probability is carried in
//! `trace_deficit`.
//!
//! States built from thermal inputs keep their construction spectrum: the
//! thermal weights and the images of the number states under the applied
//! gates. Fidelity and relative entropy use those weights directly, which
//! keeps eigenvalues far below machine epsilon exact where a dense
//! eigensolver would round them to noise.

mod gates;
mod symplectic;

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use gates::{apply_gate, apply_gates, gate_symplectic, Gate};
pub use symplectic::{
    bloch_messiah, gaussian_state, gaussian_state_from_cm, gaussian_state_one_mode, gaussian_unitary_gates, omega_n,
    passive_gates, passive_to_unitary, williamson, EulerFactors, WilliamsonFactors,
};

pub type C64 = Complex64;

pub const DEFAULT_DIM_ONE_MODE: usize = 60;
pub const DEFAULT_DIM_TWO_MODE: usize = 20;
/// Largest trace deficit for which second moments are reported without error.
pub const TRUNCATION_TOL: f64 = 1e-8;
const SUPPORT_TOL: f64 = 1e-13;
const ENTROPY_FLOOR: f64 = 1e-15;
/// Construction weights below this are skipped in the fidelity sum.
const FIDELITY_WEIGHT_FLOOR: f64 = 1e-20;

#[derive(Clone, Debug)]
struct Spectral {
    weights: Vec<f64>,
    vectors: DMatrix<C64>,
}

/// Dense operator on one or two truncated modes.
#[derive(Clone, Debug)]
pub struct FockOperator {
    dense: OnceLock<DMatrix<C64>>,
    spectral: Option<Spectral>,
    pub dim_per_mode: usize,
    pub modes: usize,
    /// 1 − Tr ρ.
    pub trace_deficit: f64,
    /// Largest |U†U − I| entry over the truncated gate matrices applied so far.
    pub unitarity_deviation: f64,
}

impl FockOperator {
    pub fn from_matrix(matrix: DMatrix<C64>, dim_per_mode: usize, modes: usize) -> Result<Self> {
        let dim = total_dim(dim_per_mode, modes)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} matrix for {modes} mode(s) of dimension {dim_per_mode}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym > 1e-12 {
            return Err(Error::DomainError(format!(
                "operator is not Hermitian (deviation {asym:.2e})"
            )));
        }
        let trace_deficit = 1.0 - matrix.trace().re;
        let dense = OnceLock::new();
        let _ = dense.set(matrix);
        Ok(Self {
            dense,
            spectral: None,
            dim_per_mode,
            modes,
            trace_deficit,
            unitarity_deviation: 0.0,
        })
    }

    fn from_spectral(weights: Vec<f64>, vectors: DMatrix<C64>, dim_per_mode: usize, modes: usize) -> Self {
        let trace = weights
            .iter()
            .zip(vectors.column_iter())
            .map(|(w, v)| w * v.norm_squared())
            .sum::<f64>();
        Self {
            dense: OnceLock::new(),
            spectral: Some(Spectral { weights, vectors }),
            dim_per_mode,
            modes,
            trace_deficit: 1.0 - trace,
            unitarity_deviation: 0.0,
        }
    }

    /// Total Hilbert-space dimension N^modes.
    pub fn dim(&self) -> usize {
        self.dim_per_mode.pow(self.modes as u32)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.dense.get_or_init(|| {
            let sp = self.spectral.as_ref().expect("operator has a dense or spectral form");
            let y = weighted_vectors(sp, 0.0);
            &y * y.adjoint()
        })
    }

    /// Keeps the first `n` levels of every mode of a spectral state.
    pub(crate) fn crop(&self, n: usize) -> FockOperator {
        let m = self.dim_per_mode;
        let sp = self.spectral.as_ref().expect("crop needs a spectral state");
        let rows: Vec<usize> = match self.modes {
            1 => (0..n).collect(),
            _ => (0..n * n).map(|i| (i / n) * m + i % n).collect(),
        };
        let vectors = sp.vectors.select_rows(rows.iter());
        let mut out = FockOperator::from_spectral(sp.weights.clone(), vectors, n, self.modes);
        out.unitarity_deviation = self.unitarity_deviation;
        out
    }

    /// Construction weights, when the state was built from a thermal input.
    pub fn construction_weights(&self) -> Option<&[f64]> {
        self.spectral.as_ref().map(|s| s.weights.as_slice())
    }

    pub fn purity(&self) -> f64 {
        self.matrix().iter().map(|z| z.norm_sqr()).sum()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim_per_mode != other.dim_per_mode || self.modes != other.modes {
            return Err(Error::DimensionMismatch(format!(
                "{} mode(s) × {} vs {} mode(s) × {}",
                self.modes, self.dim_per_mode, other.modes, other.dim_per_mode
            )));
        }
        Ok(())
    }
}

fn total_dim(dim_per_mode: usize, modes: usize) -> Result<usize> {
    if !(modes == 1 || modes == 2) || dim_per_mode < 2 {
        return Err(Error::DimensionMismatch(format!(
            "{modes} mode(s) with {dim_per_mode} levels each is not supported"
        )));
    }
    Ok(dim_per_mode.pow(modes as u32))
}

/// Columns √λ_k·w_k for weights above `floor`.
fn weighted_vectors(sp: &Spectral, floor: f64) -> DMatrix<C64> {
    let keep: Vec<usize> = (0..sp.weights.len()).filter(|&k| sp.weights[k] > floor).collect();
    let mut y = DMatrix::zeros(sp.vectors.nrows(), keep.len());
    for (j, &k) in keep.iter().enumerate() {
        y.set_column(j, &(sp.vectors.column(k) * C64::from(sp.weights[k].sqrt())));
    }
    y
}

/// A factor L with LL† = YY† and at most as many columns as rows.
fn compact(y: DMatrix<C64>) -> DMatrix<C64> {
    if y.ncols() <= y.nrows() {
        return y;
    }
    y.adjoint().qr().r().adjoint()
}

/// Thermal state with symplectic eigenvalue ν: weights (ν−½)ⁿ/(ν+½)ⁿ⁺¹ for n < N.
pub fn thermal_state(nu: f64, n: usize) -> Result<FockOperator> {
    if !(nu >= 0.5) {
        return Err(Error::UnphysicalState(nu));
    }
    total_dim(n, 1)?;
    let q = (nu - 0.5) / (nu + 0.5);
    let mut weights = Vec::with_capacity(n);
    let mut p = 1.0 / (nu + 0.5);
    for _ in 0..n {
        weights.push(p);
        p *= q;
    }
    let mut st = FockOperator::from_spectral(weights, DMatrix::identity(n, n), n, 1);
    st.trace_deficit = q.powi(n as i32);
    Ok(st)
}

/// ρ₁ ⊗ ρ₂ for two one-mode operators of equal truncation.
pub fn tensor(a: &FockOperator, b: &FockOperator) -> Result<FockOperator> {
    a.check_same_shape(b)?;
    if a.modes != 1 {
        return Err(Error::DimensionMismatch("tensor product needs one-mode factors".into()));
    }
    let n = a.dim_per_mode;
    let mut out = match (&a.spectral, &b.spectral) {
        (Some(sa), Some(sb)) => {
            let weights = sa
                .weights
                .iter()
                .flat_map(|x| sb.weights.iter().map(move |y| x * y))
                .collect();
            FockOperator::from_spectral(weights, sa.vectors.kronecker(&sb.vectors), n, 2)
        }
        _ => FockOperator::from_matrix(a.matrix().kronecker(b.matrix()), n, 2)?,
    };
    out.trace_deficit = 1.0 - (1.0 - a.trace_deficit) * (1.0 - b.trace_deficit);
    out.unitarity_deviation = a.unitarity_deviation.max(b.unitarity_deviation);
    Ok(out)
}

fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let e = SymmetricEigen::new(m.clone());
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

/// Uhlmann fidelity (Tr √(√ρ ρ′ √ρ))².
pub fn fidelity_fock(rho: &FockOperator, rho_prime: &FockOperator) -> Result<f64> {
    rho.check_same_shape(rho_prime)?;
    if let (Some(a), Some(b)) = (&rho.spectral, &rho_prime.spectral) {
        // the nuclear norm of √ρ √ρ′ is the trace in the definition
        let ya = compact(weighted_vectors(a, FIDELITY_WEIGHT_FLOOR));
        let yb = compact(weighted_vectors(b, FIDELITY_WEIGHT_FLOOR));
        let g = ya.adjoint() * yb;
        let sv = g.singular_values();
        return Ok(sv.sum().powi(2));
    }
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let mut sqrt_rho = vecs.clone();
    for (k, mut col) in sqrt_rho.column_iter_mut().enumerate() {
        col *= C64::from(vals[k].max(0.0).sqrt());
    }
    let sqrt_rho = sqrt_rho * vecs.adjoint();
    let inner = &sqrt_rho * rho_prime.matrix() * &sqrt_rho;
    let inner = (&inner + inner.adjoint()) * C64::from(0.5);
    let (mu, _) = hermitian_eigen(&inner);
    Ok(mu.iter().map(|m| m.max(0.0).sqrt()).sum::<f64>().powi(2))
}

/// Tr[ρ ln σ] given the spectral form of σ; `None` when ρ leaks out of σ's support.
fn cross_log(rho: &FockOperator, sigma: &Spectral) -> std::result::Result<f64, f64> {
    let w = &sigma.vectors;
    // populations ⟨s_k|ρ|s_k⟩
    let pops: Vec<f64> = match &rho.spectral {
        Some(r) => {
            let y = compact(weighted_vectors(r, 0.0));
            let c = w.adjoint() * y;
            c.row_iter().map(|row| row.norm_squared()).collect()
        }
        None => {
            let rw = rho.matrix() * w;
            (0..w.ncols()).map(|k| w.column(k).dotc(&rw.column(k)).re).collect()
        }
    };
    let mut total = 0.0;
    for (k, &p) in pops.iter().enumerate() {
        let lam = sigma.weights[k];
        if lam > 0.0 {
            total += p * lam.ln();
        } else if p > SUPPORT_TOL {
            return Err(p);
        }
    }
    Ok(total)
}

fn dense_spectral(m: &DMatrix<C64>) -> Spectral {
    let (vals, vecs) = hermitian_eigen(m);
    let weights = vals
        .into_iter()
        .map(|v| if v > SUPPORT_TOL { v } else { 0.0 })
        .collect();
    Spectral { weights, vectors: vecs }
}

/// S(ρ′/ρ) = Tr[ρ(ln ρ − ln ρ′)] in nats.
pub fn rel_entropy_fock(rho_prime: &FockOperator, rho: &FockOperator) -> Result<f64> {
    rho.check_same_shape(rho_prime)?;
    let sp_rho = rho.spectral.clone().unwrap_or_else(|| dense_spectral(rho.matrix()));
    let sp_prime = rho_prime
        .spectral
        .clone()
        .unwrap_or_else(|| dense_spectral(rho_prime.matrix()));
    let self_term = cross_log(rho, &sp_rho).map_err(Error::SupportViolation)?;
    let cross = cross_log(rho, &sp_prime).map_err(Error::SupportViolation)?;
    Ok(self_term - cross)
}

/// −Σ λ ln λ over eigenvalues above 1e-15.
pub fn entropy_fock(rho: &FockOperator) -> f64 {
    let (vals, _) = hermitian_eigen(rho.matrix());
    -vals
        .iter()
        .filter(|&&l| l > ENTROPY_FLOOR)
        .map(|l| l * l.ln())
        .sum::<f64>()
}

/// Symmetrized second moments without the truncation check.
pub fn moments_unchecked(state: &FockOperator) -> DMatrix<f64> {
    let rho = state.matrix();
    let n = state.dim_per_mode;
    let sq = |k: usize| (k as f64).sqrt();
    // ⟨X⟩ = Σᵢ x·ρ[i, j] where X|i⟩ = x|j⟩
    let expect = |f: &dyn Fn(usize) -> Option<(usize, f64)>| -> C64 {
        (0..rho.nrows())
            .filter_map(|i| f(i).map(|(j, x)| rho[(i, j)] * x))
            .sum()
    };
    let split = |i: usize| if state.modes == 1 { (i, 0) } else { (i / n, i % n) };
    let mut cm = DMatrix::zeros(2 * state.modes, 2 * state.modes);
    for mode in 0..state.modes {
        let step = if state.modes == 2 && mode == 0 { n } else { 1 };
        let level = |i: usize| if mode == 0 { split(i).0 } else { split(i).1 };
        let a2 = expect(&|i| {
            let k = level(i);
            (k >= 2).then(|| (i - 2 * step, sq(k) * sq(k - 1)))
        });
        let num: f64 = (0..rho.nrows()).map(|i| rho[(i, i)].re * level(i) as f64).sum();
        let (q, p) = (2 * mode, 2 * mode + 1);
        cm[(q, q)] = a2.re + num + 0.5;
        cm[(p, p)] = -a2.re + num + 0.5;
        cm[(q, p)] = a2.im;
        cm[(p, q)] = a2.im;
    }
    if state.modes == 2 {
        let idx = |n1: usize, n2: usize| n1 * n + n2;
        let m = expect(&|i| {
            let (k1, k2) = split(i);
            (k1 >= 1 && k2 >= 1).then(|| (idx(k1 - 1, k2 - 1), sq(k1) * sq(k2)))
        });
        let k = expect(&|i| {
            let (k1, k2) = split(i);
            (k1 + 1 < n && k2 >= 1).then(|| (idx(k1 + 1, k2 - 1), sq(k1 + 1) * sq(k2)))
        });
        let entries = [
            (0, 2, m.re + k.re),
            (1, 3, -m.re + k.re),
            (0, 3, m.im + k.im),
            (1, 2, m.im - k.im),
        ];
        for (i, j, x) in entries {
            cm[(i, j)] = x;
            cm[(j, i)] = x;
        }
    }
    cm
}

/// Covariance matrix ⟨{ξᵢ, ξⱼ}⟩/2 of a truncated state.
pub fn moments_from_fock(state: &FockOperator) -> Result<DMatrix<f64>> {
    if state.trace_deficit.abs() > TRUNCATION_TOL {
        return Err(Error::TruncationWarning(state.trace_deficit));
    }
    Ok(moments_unchecked(state))
}

#[cfg(test)]
mod tests;
