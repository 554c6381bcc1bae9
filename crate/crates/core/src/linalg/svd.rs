//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations,
//! plus the norms and the polar factorization built on it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::Result;

const MAX_SWEEPS: usize = 80;
const ORTHOGONALITY_THRESHOLD: f64 = 1e-15;

/// Relative threshold below which a singular value counts as zero for
/// rank and invertibility decisions.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Thin SVD `A = U diag(sigma) V*` of an `m x n` matrix with `m >= n`.
/// `left` is `m x n`; columns paired with a zero singular value are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: ComplexMatrix,
    pub values: Vec<f64>,
    pub right: ComplexMatrix,
}

/// Works on a column-major copy of `a` (`cols[j]` is column `j`) and
/// returns the orthogonalized columns together with the accumulated rotation.
fn hestenes(a: &ComplexMatrix) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let n = a.cols();
    let mut w = a.columns();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha: f64 = w[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = w[i].iter().zip(&w[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= ORTHOGONALITY_THRESHOLD * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let shift = phase.conj();
                for cols in [&mut w, &mut v] {
                    let (lo, hi) = cols.split_at_mut(j);
                    for (x, y) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                        let yy = *y * shift;
                        let xi = *x;
                        *x = xi * c - yy * s;
                        *y = xi * s + yy * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

/// Thin SVD. For wide inputs the decomposition of the adjoint is transposed back.
pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd {
            left: t.right,
            values: t.values,
            right: t.left,
        };
    }
    let (w, v) = hestenes(a);
    let m = a.rows();
    let n = a.cols();
    let norms: Vec<f64> = w
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let values: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let left = ComplexMatrix::from_fn(m, n, |i, k| {
        let src = order[k];
        if norms[src] > 0.0 {
            w[src][i] / norms[src]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let right = ComplexMatrix::from_fn(n, n, |i, k| v[order[k]][i]);
    Svd {
        left,
        values,
        right,
    }
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let t;
    let a = if a.rows() < a.cols() {
        t = a.adjoint();
        &t
    } else {
        a
    };
    let (w, _) = hestenes(a);
    let mut s: Vec<f64> = w
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.max_abs() == 0.0 {
        return 0.0;
    }
    singular_values(a)[0]
}

/// Hilbert-Schmidt norm: square root of the sum of squared singular values.
pub fn hilbert_schmidt_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// Trace-class norm: sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).iter().sum()
}

/// Numerical rank relative to the largest singular value.
pub fn numerical_rank(a: &ComplexMatrix, rel: f64) -> usize {
    let s = singular_values(a);
    let top = s[0];
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel * top).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Invertibility {
    pub min_singular: f64,
    pub max_singular: f64,
    /// `max / min`, infinite for singular input.
    pub condition: f64,
    pub invertible: bool,
}

impl Invertibility {
    pub fn ratio(&self) -> f64 {
        if self.max_singular == 0.0 {
            0.0
        } else {
            self.min_singular / self.max_singular
        }
    }
}

/// A square matrix is invertible when its smallest singular value exceeds
/// `RANK_THRESHOLD` times its largest.
pub fn invertibility(a: &ComplexMatrix) -> Invertibility {
    invertibility_with(a, RANK_THRESHOLD)
}

pub fn invertibility_with(a: &ComplexMatrix, rel: f64) -> Invertibility {
    let s = singular_values(a);
    let max = s[0];
    let min = if a.is_square() {
        *s.last().unwrap()
    } else {
        0.0
    };
    Invertibility {
        min_singular: min,
        max_singular: max,
        condition: if min > 0.0 { max / min } else { f64::INFINITY },
        invertible: max > 0.0 && min > rel * max,
    }
}

/// `V = W P` with `W` a partial isometry (`ker W = ker V`) and `P = |V|`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub isometry: ComplexMatrix,
    pub positive: ComplexMatrix,
}

pub fn polar(v: &ComplexMatrix) -> Result<Polar> {
    let n = v.ensure_square()?;
    let dec = svd(v);
    let top = dec.values[0];
    let cutoff = top * f64::EPSILON * n as f64;
    let isometry = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .filter(|&k| dec.values[k] > cutoff)
            .map(|k| dec.left.get(i, k) * dec.right.get(j, k).conj())
            .sum()
    });
    let positive = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| dec.right.get(i, k) * dec.values[k] * dec.right.get(j, k).conj())
            .sum()
    });
    Ok(Polar { isometry, positive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn singular_value_examples() {
        assert!(close(
            &singular_values(&ComplexMatrix::identity(2)),
            &[1.0, 1.0],
            1e-15
        ));
        let shift = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!(close(&singular_values(&shift), &[2.0, 0.0], 1e-15));
        let h = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!(close(&singular_values(&h), &[3.0, 1.0], 1e-14));
    }

    #[test]
    fn wide_and_tall_agree() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]);
        let s1 = singular_values(&a);
        let s2 = singular_values(&a.adjoint());
        assert!(close(&s1, &s2, 1e-14));
        // A A* = [[2,1],[1,2]]
        assert!(close(&s1, &[3f64.sqrt(), 1.0], 1e-14));
    }

    #[test]
    fn svd_reconstructs() {
        let a = ComplexMatrix::new(
            3,
            2,
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 3.0),
                Complex64::new(2.0, -1.0),
                Complex64::new(1.0, 1.0),
            ],
        )
        .unwrap();
        let d = svd(&a);
        let rebuilt = &(&d.left * &ComplexMatrix::from_real_diag(&d.values)) * &d.right.adjoint();
        assert!(rebuilt.max_abs_diff(&a).unwrap() < 1e-13);
        let wide = svd(&a.adjoint());
        let rebuilt =
            &(&wide.left * &ComplexMatrix::from_real_diag(&wide.values)) * &wide.right.adjoint();
        assert!(rebuilt.max_abs_diff(&a.adjoint()).unwrap() < 1e-13);
    }

    #[test]
    fn polar_examples() {
        let p = polar(&ComplexMatrix::from_real_diag(&[2.0, 3.0])).unwrap();
        assert!(
            p.isometry
                .max_abs_diff(&ComplexMatrix::identity(2))
                .unwrap()
                < 1e-14
        );
        assert!(
            p.positive
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0]))
                .unwrap()
                < 1e-14
        );

        let th = 0.7f64;
        let rot = ComplexMatrix::from_real_rows(&[&[th.cos(), -th.sin()], &[th.sin(), th.cos()]]);
        let p = polar(&rot).unwrap();
        assert!(p.isometry.max_abs_diff(&rot).unwrap() < 1e-14);
        assert!(
            p.positive
                .max_abs_diff(&ComplexMatrix::identity(2))
                .unwrap()
                < 1e-14
        );

        let v = ComplexMatrix::from_real_rows(&[&[0.0, -2.0], &[2.0, 0.0]]);
        let p = polar(&v).unwrap();
        let w = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(p.isometry.max_abs_diff(&w).unwrap() < 1e-14);
        assert!(
            p.positive
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 2.0]))
                .unwrap()
                < 1e-14
        );

        assert!(matches!(
            polar(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn polar_of_singular_is_partial_isometry() {
        let v = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let p = polar(&v).unwrap();
        assert!((&p.isometry * &p.positive).max_abs_diff(&v).unwrap() < 1e-14);
        // ker W = ker V = span(e1)
        let we1 = p
            .isometry
            .mul_vec(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        assert!(we1.iter().all(|z| z.norm() < 1e-14));
        assert!(
            (&p.isometry.adjoint() * &v)
                .max_abs_diff(&p.positive)
                .unwrap()
                < 1e-14
        );
    }

    #[test]
    fn invertibility_flags() {
        let inv = invertibility(&ComplexMatrix::from_real_diag(&[1.0, 1e-12]));
        assert!(!inv.invertible);
        let inv = invertibility(&ComplexMatrix::from_real_diag(&[2.0, 0.5]));
        assert!(inv.invertible);
        assert!((inv.condition - 4.0).abs() < 1e-14);
        assert!(!invertibility(&ComplexMatrix::zeros(2, 2)).invertible);
        assert_eq!(
            numerical_rank(
                &ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]),
                RANK_THRESHOLD
            ),
            1
        );
    }
}
