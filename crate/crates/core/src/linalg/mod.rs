//! Dense complex linear algebra used by the frame machinery.

mod eigen;
mod matrix;
mod positive;
mod solve;
mod svd;

use serde::{Deserialize, Serialize};

pub use eigen::{
    hermitian_eig, self_adjoint_residual, spectral_map, spectral_summary, HermitianEigen,
    SpectralSummary,
};
pub use matrix::{inner, norm2, ComplexMatrix};
pub use positive::{hermitian_sqrt, inverse_sqrt, positivity_check, sandwich_bounds, Positivity};
pub use solve::{inverse, solve, solve_vec};
pub use svd::{
    hilbert_schmidt_norm, invertibility, invertibility_with, numerical_rank, operator_norm, polar,
    singular_values, svd, trace_norm, Invertibility, Polar, Svd, RANK_THRESHOLD,
};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Relative self-adjointness tolerance and absolute positivity tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub symmetry: f64,
    pub positivity: f64,
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            symmetry: tol,
            positivity: tol,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::uniform(DEFAULT_TOLERANCE)
    }
}
