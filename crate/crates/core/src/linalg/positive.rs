//! Positivity, square roots and operator sandwiches `A C <= T <= B C`.

use serde::{Deserialize, Serialize};

use super::eigen::{hermitian_eig, self_adjoint_residual, spectral_map};
use super::matrix::ComplexMatrix;
use super::Tolerances;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Positivity {
    pub self_adjoint: bool,
    /// Absent when the matrix is not self-adjoint.
    pub lambda_min: Option<f64>,
    /// Self-adjoint with smallest eigenvalue above the tolerance.
    pub in_gl_plus: bool,
    pub self_adjoint_residual: f64,
}

/// Classifies `T` against `GL+`: self-adjoint within `tol` (relative) and
/// `lambda_min > tol`.
pub fn positivity_check(t: &ComplexMatrix, tol: f64) -> Result<Positivity> {
    t.ensure_square()?;
    let residual = self_adjoint_residual(t)?;
    if residual > tol {
        return Ok(Positivity {
            self_adjoint: false,
            lambda_min: None,
            in_gl_plus: false,
            self_adjoint_residual: residual,
        });
    }
    let eig = hermitian_eig(t, &Tolerances::uniform(tol))?;
    let lambda_min = eig.values[0];
    Ok(Positivity {
        self_adjoint: true,
        lambda_min: Some(lambda_min),
        in_gl_plus: lambda_min > tol,
        self_adjoint_residual: residual,
    })
}

/// Positive square root by spectral calculus. Eigenvalues in
/// `[-tol.positivity, 0)` are clamped to zero.
pub fn hermitian_sqrt(t: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(t, tol)?;
    let lambda_min = eig.values[0];
    if lambda_min < -tol.positivity {
        return Err(Error::NotPositive {
            lambda_min,
            tol: tol.positivity,
        });
    }
    Ok(spectral_map(&eig, |l| l.max(0.0).sqrt()))
}

/// `T^{-1/2}` for `T` in `GL+`.
pub fn inverse_sqrt(t: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(t, tol)?;
    let lambda_min = eig.values[0];
    if lambda_min <= tol.positivity {
        return Err(Error::NotPositive {
            lambda_min,
            tol: tol.positivity,
        });
    }
    Ok(spectral_map(&eig, |l| 1.0 / l.sqrt()))
}

/// Optimal constants with `A C <= T <= B C`: the extremal eigenvalues of
/// `C^{-1/2} T C^{-1/2}`.
pub fn sandwich_bounds(
    t: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    let n = t.ensure_square()?;
    if c.rows() != n || c.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "T is {n}x{n}, C is {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    let pc = positivity_check(c, tol.positivity)?;
    if !pc.in_gl_plus {
        return Err(Error::NotPositive {
            lambda_min: pc.lambda_min.unwrap_or(f64::NAN),
            tol: tol.positivity,
        });
    }
    let residual = self_adjoint_residual(t)?;
    if residual > tol.symmetry {
        return Err(Error::NotHermitian {
            residual,
            tol: tol.symmetry,
        });
    }
    let root = inverse_sqrt(c, tol)?;
    let reduced = &(&root * &t.hermitian_part()) * &root;
    let eig = hermitian_eig(&reduced.hermitian_part(), tol)?;
    Ok((eig.values[0], *eig.values.last().unwrap()))
}
