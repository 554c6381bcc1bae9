//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use super::svd::operator_norm;
use super::Tolerances;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
/// Sweeps stop once the off-diagonal Frobenius mass drops below this
/// fraction of the full Frobenius norm.
const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix
/// (eigenvector `k` is column `k`).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub self_adjoint_residual: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// `||A - A*||_op / max(1, ||A||_op)`
pub fn self_adjoint_residual(a: &ComplexMatrix) -> Result<f64> {
    a.ensure_square()?;
    let diff = a.try_sub(&a.adjoint())?;
    if diff.max_abs() == 0.0 {
        return Ok(0.0);
    }
    Ok(operator_norm(&diff) / operator_norm(a).max(1.0))
}

pub fn hermitian_eig(h: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    h.ensure_square()?;
    let residual = self_adjoint_residual(h)?;
    if residual > tol.symmetry {
        return Err(Error::NotHermitian {
            residual,
            tol: tol.symmetry,
        });
    }
    Ok(jacobi_eig(&h.hermitian_part()))
}

pub fn spectral_summary(h: &ComplexMatrix, tol: &Tolerances) -> Result<SpectralSummary> {
    let residual = self_adjoint_residual(h)?;
    let eig = hermitian_eig(h, tol)?;
    Ok(SpectralSummary {
        min_eigenvalue: eig.values[0],
        max_eigenvalue: *eig.values.last().unwrap(),
        eigenvalues: eig.values,
        self_adjoint_residual: residual,
    })
}

/// Applies a real function to the spectrum of a Hermitian matrix:
/// `V diag(f(lambda)) V*`.
pub fn spectral_map(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let v = &eig.vectors;
    let n = eig.values.len();
    let mapped: Vec<f64> = eig.values.iter().map(|&l| f(l)).collect();
    ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| v.get(i, k) * mapped[k] * v.get(j, k).conj())
            .sum()
    })
}

/// Cyclic Jacobi on an exactly Hermitian input.
fn jacobi_eig(h: &ComplexMatrix) -> HermitianEigen {
    let n = h.rows();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();

    if total > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= OFF_DIAGONAL_THRESHOLD * total {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v.get(i, order[k]));
    HermitianEigen { values, vectors }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `G = diag(1, e^{-i phi}) R(theta)`
/// acting on coordinates `p, q`, then updates `a <- G* a G` and `v <- v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    // Skip rotations that would not change the diagonal in floating point.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a.set(p, q, Complex64::new(0.0, 0.0));
        a.set(q, p, Complex64::new(0.0, 0.0));
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = a.rows();
    // columns: a <- a G
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * gpp + akq * gqp);
        a.set(k, q, akp * gpq + akq * gqq);
    }
    // rows: a <- G* a
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, gpp.conj() * apk + gqp.conj() * aqk);
        a.set(q, k, gpq.conj() * apk + gqq.conj() * aqk);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * gpp + vkq * gqp);
        v.set(k, q, vkp * gpq + vkq * gqq);
    }
}
