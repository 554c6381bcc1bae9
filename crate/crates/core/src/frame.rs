//! Standard frame machinery: synthesis and analysis operators, the frame
//! operator `S = T T*`, the Gram matrix `T* T`, optimal frame bounds and
//! Bessel/frame/Riesz-basis classification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, inner, numerical_rank, ComplexMatrix, Tolerances, RANK_THRESHOLD,
};

/// Ordered family `f_1, ..., f_n` of vectors in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFamily {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl FrameFamily {
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        if vectors.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn from_real(dim: usize, vectors: &[&[f64]]) -> Result<Self> {
        Self::new(
            dim,
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// The columns of `m` as a family.
    pub fn from_columns(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.rows(),
            vectors: m.columns(),
        }
    }

    pub fn canonical(dim: usize) -> Self {
        Self::from_columns(&ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k]
    }

    /// `d x n` matrix with `f_k` as column `k`: the synthesis operator.
    pub fn synthesis_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, self.len(), |i, k| self.vectors[k][i])
    }

    /// The family `{A f_k}`.
    pub fn map(&self, a: &ComplexMatrix) -> Result<Self> {
        if a.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator has {} columns, family lives in C^{}",
                a.cols(),
                self.dim
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| a.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: a.rows(),
            vectors,
        })
    }

    pub fn squared_norm_sum(&self) -> f64 {
        self.vectors
            .iter()
            .flat_map(|v| v.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }
}

/// `T c = sum_k c_k f_k`
pub fn synthesis(f: &FrameFamily, c: &[Complex64]) -> Result<Vec<Complex64>> {
    if c.len() != f.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            found: c.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); f.dim()];
    for (ck, fk) in c.iter().zip(f.vectors()) {
        for (o, x) in out.iter_mut().zip(fk) {
            *o += ck * x;
        }
    }
    Ok(out)
}

/// `T* x = (<x, f_k>)_k`
pub fn analysis(f: &FrameFamily, x: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.len() != f.dim() {
        return Err(Error::LengthMismatch {
            expected: f.dim(),
            found: x.len(),
        });
    }
    Ok(f.vectors().iter().map(|fk| inner(x, fk)).collect())
}

/// `S = sum_k f_k <., f_k>`
pub fn frame_operator(f: &FrameFamily) -> ComplexMatrix {
    let d = f.dim();
    ComplexMatrix::from_fn(d, d, |i, j| {
        f.vectors().iter().map(|v| v[i] * v[j].conj()).sum()
    })
}

/// Gram matrix with entry `(j, k) = <f_k, f_j>`.
pub fn gram(f: &FrameFamily) -> ComplexMatrix {
    let n = f.len();
    ComplexMatrix::from_fn(n, n, |j, k| inner(f.vector(k), f.vector(j)))
}

/// Optimal bounds `(A, B)`: the extreme eigenvalues of the frame operator.
pub fn frame_bounds(f: &FrameFamily) -> (f64, f64) {
    let s = frame_operator(f);
    // Built as a sum of rank-one Hermitian terms, so the symmetry check
    // cannot fail.
    let eig = hermitian_eig(&s, &Tolerances::default()).expect("frame operator is Hermitian");
    (eig.values[0], *eig.values.last().unwrap())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameClassification {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_complete: bool,
    pub is_riesz_basis: bool,
    pub tolerance: f64,
}

pub fn is_complete(f: &FrameFamily) -> bool {
    numerical_rank(&f.synthesis_matrix(), RANK_THRESHOLD) == f.dim()
}

pub fn classify(f: &FrameFamily, tol: f64) -> FrameClassification {
    let (a, b) = frame_bounds(f);
    let complete = is_complete(f);
    let is_frame = complete && a > tol;
    FrameClassification {
        lower_bound: a,
        upper_bound: b,
        // always finite in finite dimension
        is_bessel: true,
        is_frame,
        is_tight: is_frame && (a - b).abs() <= tol * b.max(1.0),
        is_complete: complete,
        is_riesz_basis: is_frame && f.len() == f.dim(),
        tolerance: tol,
    }
}
