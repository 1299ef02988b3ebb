//! Gaussian entanglement measures for symmetric two-mode Gaussian states.
//!
//! Covariance matrices follow the ħ = 1 convention (vacuum = ½·I) with
//! quadrature ordering (q1, p1, q2, p2). The closed-form measures live in
//! [`bures`] and [`relent`]; [`fock`] rebuilds the same states as dense
//! density matrices in a truncated number basis and serves as an
//! independent brute-force check.

pub mod bures;
pub mod cm;
pub mod error;
pub mod fock;
pub mod one_mode;
pub mod optics;
pub mod optimize;
pub mod relent;
pub mod standard_forms;

pub use bures::{bures_entanglement, max_fidelity_closed, numeric_max_fidelity, BuresResult};
pub use cm::{
    invariants, is_physical, is_separable, omega, partial_transpose, symplectic_spectrum, BlockDecomposition,
    Invariants4, SymplecticSpectrum, TwoModeCM,
};
pub use error::{Error, Result};
pub use one_mode::OneModeCM;
pub use relent::{rel_ent_entanglement, RelEntResult};
pub use standard_forms::{ScaledState, StandardFormI, SymmetricState};
