//! Gaussian elimination with partial pivoting.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::svd::invertibility;
use crate::error::{Error, Result};

/// Solves `A X = B` for square invertible `A`. Invertibility is decided on
/// singular values (see [`invertibility`]); `what` names the operator in the
/// error.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix, what: &str) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    let inv = invertibility(a);
    if !inv.invertible {
        return Err(Error::NotInvertible {
            what: what.to_string(),
            ratio: inv.ratio(),
        });
    }
    let m = b.cols();
    let mut lu: Vec<Complex64> = a.as_slice().to_vec();
    let mut x: Vec<Complex64> = b.as_slice().to_vec();

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| lu[i * n + col].norm().total_cmp(&lu[j * n + col].norm()))
            .unwrap();
        if pivot != col {
            for k in 0..n {
                lu.swap(col * n + k, pivot * n + k);
            }
            for k in 0..m {
                x.swap(col * m + k, pivot * m + k);
            }
        }
        let d = lu[col * n + col];
        for row in (col + 1)..n {
            let f = lu[row * n + col] / d;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let v = lu[col * n + k];
                lu[row * n + k] -= f * v;
            }
            for k in 0..m {
                let v = x[col * m + k];
                x[row * m + k] -= f * v;
            }
        }
    }
    for col in (0..n).rev() {
        let d = lu[col * n + col];
        for k in 0..m {
            let mut acc = x[col * m + k];
            for j in (col + 1)..n {
                acc -= lu[col * n + j] * x[j * m + k];
            }
            x[col * m + k] = acc / d;
        }
    }
    ComplexMatrix::new(n, m, x)
}

pub fn inverse(a: &ComplexMatrix, what: &str) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    solve(a, &ComplexMatrix::identity(n), what)
}

pub fn solve_vec(a: &ComplexMatrix, b: &[Complex64], what: &str) -> Result<Vec<Complex64>> {
    let rhs = ComplexMatrix::new(b.len(), 1, b.to_vec())?;
    Ok(solve(a, &rhs, what)?.column(0))
}
