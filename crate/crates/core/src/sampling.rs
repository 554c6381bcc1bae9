//! Seeded random vectors and matrices. Every generator in the crate draws
//! from `ChaCha8Rng`, so a seed reproduces the same values on every platform.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, norm2, ComplexMatrix};

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Uniform on the unit sphere of `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v = random_vector(rng, n);
        let norm = norm2(&v);
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Hermitian matrix `(X + X*) / 2` with Gaussian `X`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// `n x n` unitary from Gram-Schmidt (applied twice) on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = random_vector(rng, n);
        for _ in 0..2 {
            for q in &cols {
                let p = inner(&v, q);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= p * y;
                }
            }
        }
        let norm = norm2(&v);
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_columns(&cols).expect("finite columns")
}

/// `Q1 diag(sigma) Q2` with sigma drawn uniformly from `[lo, hi]`; the
/// condition number is at most `hi / lo`.
pub fn random_conditioned<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    lo: f64,
    hi: f64,
) -> ComplexMatrix {
    let q1 = random_unitary(rng, n);
    let q2 = random_unitary(rng, n);
    let sigma: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    &(&q1 * &ComplexMatrix::from_real_diag(&sigma)) * &q2
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..8 {
            let q = random_unitary(&mut rng, n);
            let defect = (&q.adjoint() * &q)
                .max_abs_diff(&ComplexMatrix::identity(n))
                .unwrap();
            assert!(defect < 1e-13);
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let a = random_matrix(&mut ChaCha8Rng::seed_from_u64(9), 3, 3);
        let b = random_matrix(&mut ChaCha8Rng::seed_from_u64(9), 3, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn unit_vectors_have_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!((norm2(&random_unit_vector(&mut rng, 5)) - 1.0).abs() < 1e-14);
        }
    }
}
