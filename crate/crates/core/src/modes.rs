//! Quantum numbers of separable modes.
//!
//! Two different degrees appear: the fiber degree ℓₛ = 2k + |n| that fixes the
//! charged-sphere eigenvalue μ, and the Legendre degree n + N of the ν = 0
//! eigenfunctions. They are kept as separate fields on purpose.

use crate::error::{Result, SpectrumError};

/// Charged-sphere eigenvalue ℓₛ(ℓₛ+2) − n² with ℓₛ = 2k + |n|.
pub fn mu_of(n: i64, k: i64) -> Result<i64> {
    if k < 0 {
        return Err(SpectrumError::InvalidInput(format!("k must be non-negative, got {k}")));
    }
    let ls = 2 * k + n.abs();
    Ok(ls * (ls + 2) - n * n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeNumbers {
    n: u32,
    k: u32,
    overtone: u32,
}

impl ModeNumbers {
    /// Mode (n, k) with overtone N. Negative n is folded to |n|, since the
    /// spectrum depends on |n| only.
    pub fn new(n: i64, k: i64, overtone: i64) -> Result<Self> {
        if k < 0 {
            return Err(SpectrumError::InvalidInput(format!("k must be non-negative, got {k}")));
        }
        if overtone < 0 {
            return Err(SpectrumError::InvalidInput(format!(
                "overtone must be non-negative, got {overtone}"
            )));
        }
        let n = n.unsigned_abs();
        if n > u32::MAX as u64 || k > u32::MAX as i64 || overtone > u32::MAX as i64 {
            return Err(SpectrumError::InvalidInput("mode numbers out of range".into()));
        }
        Ok(Self { n: n as u32, k: k as u32, overtone: overtone as u32 })
    }

    /// The (n, k) family with overtone 0.
    pub fn family(n: i64, k: i64) -> Result<Self> {
        Self::new(n, k, 0)
    }

    pub fn with_overtone(self, overtone: u32) -> Self {
        Self { overtone, ..self }
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn overtone(&self) -> u32 {
        self.overtone
    }
    /// ℓₛ = 2k + |n|.
    pub fn ell_fiber(&self) -> u64 {
        2 * self.k as u64 + self.n as u64
    }
    /// μ = ℓₛ(ℓₛ+2) − n².
    pub fn mu(&self) -> u64 {
        let ls = self.ell_fiber();
        ls * (ls + 2) - (self.n as u64) * (self.n as u64)
    }
    /// Legendre degree n + N of the unperturbed eigenfunction.
    pub fn ell_legendre(&self) -> u64 {
        self.n as u64 + self.overtone as u64
    }
}
