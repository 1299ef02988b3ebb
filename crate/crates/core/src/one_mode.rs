use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Diagonal one-mode covariance matrix diag(⟨q²⟩, ⟨p²⟩).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneModeCM {
    pub sigma_qq: f64,
    pub sigma_pp: f64,
}

/// States with √det within this distance below 1/2 are treated as pure.
pub const PURE_TOL: f64 = 1e-12;

impl OneModeCM {
    pub fn new(sigma_qq: f64, sigma_pp: f64) -> Result<Self> {
        if !(sigma_qq > 0.0 && sigma_pp > 0.0) || !sigma_qq.is_finite() || !sigma_pp.is_finite() {
            return Err(Error::DomainError(format!(
                "one-mode CM entries must be positive, got ({sigma_qq}, {sigma_pp})"
            )));
        }
        Ok(Self { sigma_qq, sigma_pp })
    }

    pub fn thermal(nu: f64) -> Self {
        Self {
            sigma_qq: nu,
            sigma_pp: nu,
        }
    }

    /// Squeezed thermal state with quadrature variances (ν e^{-2r}, ν e^{2r}).
    pub fn squeezed_thermal(nu: f64, r: f64) -> Self {
        Self {
            sigma_qq: nu * (-2.0 * r).exp(),
            sigma_pp: nu * (2.0 * r).exp(),
        }
    }

    pub fn det(&self) -> f64 {
        self.sigma_qq * self.sigma_pp
    }

    /// Symplectic eigenvalue √det.
    pub fn nu(&self) -> f64 {
        self.det().sqrt()
    }

    pub fn is_physical(&self) -> bool {
        self.nu() >= 0.5 - PURE_TOL
    }

    pub fn ensure_physical(&self) -> Result<f64> {
        let nu = self.nu();
        if nu >= 0.5 - PURE_TOL {
            Ok(nu.max(0.5))
        } else {
            Err(Error::UnphysicalState(nu))
        }
    }

    pub fn is_pure(&self) -> bool {
        (self.nu() - 0.5).abs() <= PURE_TOL
    }
}
