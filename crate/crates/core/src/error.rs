use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("covariance matrix is not positive definite (smallest eigenvalue {0:e})")]
    NonPositiveDefinite(f64),
    #[error("eigenvalues of ΩV do not form ±iκ pairs (deviation {0:e})")]
    NumericalDegeneracy(f64),
    #[error("state violates the uncertainty relation (κ = {0})")]
    UnphysicalState(f64),
    #[error("covariance matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("no real non-negative (c², d²) branch (discriminant {0:e})")]
    BranchAmbiguity(f64),
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("singular denominator 2b - v in form-II system (mode {0})")]
    SingularDenominator(usize),
    #[error("matrix is not symplectic (deviation {0:e})")]
    NotSymplectic(f64),
    #[error("optimizer starts disagree (spread {0:e})")]
    OptimizerNoConverge(f64),
    #[error("no bracketing interval found below x = {0:e}")]
    BracketFailure(f64),
    #[error("support of ρ is not contained in support of ρ' (weight {0:e})")]
    SupportViolation(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("symplectic decomposition failed (deviation {0:e})")]
    DecompositionFailure(f64),
    #[error("Fock truncation too coarse (trace deficit {0:e})")]
    TruncationWarning(f64),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
