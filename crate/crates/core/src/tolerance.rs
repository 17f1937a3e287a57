//! Numerical tolerances used for validation and eigen-cutoffs.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Every tolerance the crate checks against, in one place.
///
/// Values are stored as `f64` and converted at the point of use, so one record
/// serves both scalar widths. The defaults are tuned for `f64`; `f32` callers
/// should use [`Tolerances::single_precision`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Maximum |H - H†| entry for a matrix to be accepted as Hermitian.
    pub hermitian: f64,
    /// Smallest eigenvalue accepted for a positive semidefinite operator is `-psd`.
    pub psd: f64,
    /// |tr ρ - 1| bound for density operators.
    pub trace: f64,
    /// |‖ψ‖² - 1| bound for pure states.
    pub norm: f64,
    /// Eigenvalues with |λ| at or below this are treated as zero.
    pub eig_zero: f64,
    /// Probabilities must lie in [-prob, 1 + prob] and complementary pairs sum to 1 within it.
    pub probability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            psd: 1e-10,
            trace: 1e-10,
            norm: 1e-10,
            eig_zero: 1e-9,
            probability: 1e-9,
        }
    }
}

impl Tolerances {
    /// Tolerances for data transcribed to four decimals, such as published
    /// measurement matrices whose eigenvalues sit a few 1e-6 outside [0, 1].
    pub fn transcribed() -> Self {
        Self {
            hermitian: 1e-10,
            psd: 1e-4,
            trace: 1e-4,
            norm: 1e-4,
            eig_zero: 1e-9,
            probability: 1e-4,
        }
    }

    pub fn single_precision() -> Self {
        Self {
            hermitian: 1e-5,
            psd: 1e-5,
            trace: 1e-5,
            norm: 1e-5,
            eig_zero: 1e-5,
            probability: 1e-5,
        }
    }

    #[inline]
    pub(crate) fn get<T: Real>(v: f64) -> T {
        T::lit(v)
    }
}
