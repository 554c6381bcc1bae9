//! `(U, C)`-controlled frames: the controlled frame operator
//! `S_UC f = sum_k <f, U f_k> C f_k`, the controlled Gram matrix
//! `G[k][j] = <C f_j, U f_k>`, diagnosis of controlled Bessel/frame/tight
//! behaviour, the two reconstruction formulas, Schatten-norm chains and the
//! l1 -> l-infinity bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{frame_bounds, frame_operator, FrameFamily};
use crate::linalg::{
    hermitian_eig, inner, invertibility, norm2, operator_norm, positivity_check,
    self_adjoint_residual, singular_values, solve, ComplexMatrix, Tolerances, RANK_THRESHOLD,
};

/// A family together with its controller operators `U` and `C`, both invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledSystem {
    family: FrameFamily,
    u: ComplexMatrix,
    c: ComplexMatrix,
}

impl ControlledSystem {
    pub fn new(family: FrameFamily, u: ComplexMatrix, c: ComplexMatrix) -> Result<Self> {
        let d = family.dim();
        for (name, op) in [("U", &u), ("C", &c)] {
            if op.rows() != d || op.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, family lives in C^{d}",
                    op.rows(),
                    op.cols()
                )));
            }
            let inv = invertibility(op);
            if !inv.invertible {
                return Err(Error::NotInvertible {
                    what: name.to_string(),
                    ratio: inv.ratio(),
                });
            }
        }
        Ok(Self { family, u, c })
    }

    /// `U = C = I`
    pub fn uncontrolled(family: FrameFamily) -> Self {
        let d = family.dim();
        Self {
            family,
            u: ComplexMatrix::identity(d),
            c: ComplexMatrix::identity(d),
        }
    }

    pub fn family(&self) -> &FrameFamily {
        &self.family
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    /// `{U f_k}`
    pub fn u_images(&self) -> FrameFamily {
        self.family
            .map(&self.u)
            .expect("dimensions validated at construction")
    }

    /// `{C f_k}`
    pub fn c_images(&self) -> FrameFamily {
        self.family
            .map(&self.c)
            .expect("dimensions validated at construction")
    }
}

/// `S_UC = sum_k C f_k <., U f_k>`
pub fn controlled_frame_operator(sys: &ControlledSystem) -> ComplexMatrix {
    let uf = sys.u_images();
    let cf = sys.c_images();
    let d = sys.dim();
    ComplexMatrix::from_fn(d, d, |i, j| {
        cf.vectors()
            .iter()
            .zip(uf.vectors())
            .map(|(c, u)| c[i] * u[j].conj())
            .sum()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramData {
    #[serde(skip)]
    pub matrix: Option<ComplexMatrix>,
    pub size: usize,
    pub op_norm: f64,
    pub hs_norm: f64,
    pub trace_norm: f64,
    pub min_singular: f64,
    pub singular_values: Vec<f64>,
}

impl GramData {
    pub fn from_matrix(g: ComplexMatrix) -> Self {
        let s = singular_values(&g);
        Self {
            size: g.rows(),
            op_norm: s[0],
            hs_norm: g.frobenius_norm(),
            trace_norm: s.iter().sum(),
            min_singular: *s.last().unwrap(),
            singular_values: s,
            matrix: Some(g),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.as_ref().expect("Gram matrix present")
    }

    /// Number of singular values above `RANK_THRESHOLD * op_norm`.
    pub fn rank(&self) -> usize {
        if self.op_norm == 0.0 {
            return 0;
        }
        self.singular_values
            .iter()
            .filter(|&&s| s > RANK_THRESHOLD * self.op_norm)
            .count()
    }
}

/// Controlled Gram matrix, entry `(k, j) = <C f_j, U f_k>`.
pub fn controlled_gram_matrix(sys: &ControlledSystem) -> ComplexMatrix {
    let uf = sys.u_images();
    let cf = sys.c_images();
    let n = sys.family().len();
    ComplexMatrix::from_fn(n, n, |k, j| inner(cf.vector(j), uf.vector(k)))
}

pub fn controlled_gram(sys: &ControlledSystem) -> GramData {
    GramData::from_matrix(controlled_gram_matrix(sys))
}

/// Sign structure of the Hermitian quadratic form `<S_UC f, f>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormSign {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    Degenerate,
    NonSelfAdjoint,
}

/// Notable outcomes that accompany a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    /// `S_UC` is not self-adjoint, so the controlled quadratic form takes
    /// non-real values and no real frame bounds exist.
    NonSelfAdjointForm { residual: f64 },
    /// The form is negative definite: `-|lambda|` bounds hold with the sign
    /// flipped. `|<S_UC f, f>|` lies in `[lower, upper] * ||f||^2`.
    SignDiscrepancy { lower: f64, upper: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlledDiagnosis {
    pub a_uc: Option<f64>,
    pub b_uc: Option<f64>,
    pub self_adjoint_residual: f64,
    /// Eigenvalues of the Hermitian part of `S_UC`, ascending; empty when the
    /// form is not self-adjoint.
    pub spectrum: Vec<f64>,
    pub form: FormSign,
    pub is_controlled_bessel: bool,
    pub is_controlled_frame: bool,
    pub is_controlled_tight: bool,
    /// All eigenvalues share one modulus (tight up to sign).
    pub magnitude_tight: bool,
    /// Smallest and largest `|lambda|` of `S_UC` when self-adjoint.
    pub magnitude_bounds: Option<(f64, f64)>,
    /// `C S_F U*` is in `GL+`.
    pub positivity_of_csu: bool,
    pub findings: Vec<Finding>,
    pub tolerance: f64,
}

pub fn diagnose_controlled(sys: &ControlledSystem, tol: f64) -> ControlledDiagnosis {
    let s = controlled_frame_operator(sys);
    let residual = self_adjoint_residual(&s).expect("square");

    let csu = &(sys.c() * &frame_operator(sys.family())) * &sys.u().adjoint();
    let positivity_of_csu = positivity_check(&csu, tol)
        .map(|p| p.in_gl_plus)
        .unwrap_or(false);

    if residual > tol {
        return ControlledDiagnosis {
            a_uc: None,
            b_uc: None,
            self_adjoint_residual: residual,
            spectrum: Vec::new(),
            form: FormSign::NonSelfAdjoint,
            is_controlled_bessel: false,
            is_controlled_frame: false,
            is_controlled_tight: false,
            magnitude_tight: false,
            magnitude_bounds: None,
            positivity_of_csu,
            findings: vec![Finding::NonSelfAdjointForm { residual }],
            tolerance: tol,
        };
    }

    let eig =
        hermitian_eig(&s.hermitian_part(), &Tolerances::uniform(tol)).expect("Hermitian part");
    let lo = eig.values[0];
    let hi = *eig.values.last().unwrap();
    let mag_lo = eig
        .values
        .iter()
        .map(|l| l.abs())
        .fold(f64::INFINITY, f64::min);
    let mag_hi = eig.values.iter().map(|l| l.abs()).fold(0.0, f64::max);

    let form = if lo > tol {
        FormSign::PositiveDefinite
    } else if hi < -tol {
        FormSign::NegativeDefinite
    } else if lo < -tol && hi > tol {
        FormSign::Indefinite
    } else {
        FormSign::Degenerate
    };

    let is_controlled_frame = lo > tol;
    let mut findings = Vec::new();
    if form == FormSign::NegativeDefinite {
        findings.push(Finding::SignDiscrepancy {
            lower: mag_lo,
            upper: mag_hi,
        });
    }

    ControlledDiagnosis {
        a_uc: Some(lo),
        b_uc: Some(hi),
        self_adjoint_residual: residual,
        spectrum: eig.values,
        form,
        is_controlled_bessel: true,
        is_controlled_frame,
        is_controlled_tight: is_controlled_frame && (hi - lo).abs() <= tol * hi.max(1.0),
        magnitude_tight: mag_lo > tol && (mag_hi - mag_lo) <= tol * mag_hi.max(1.0),
        magnitude_bounds: Some((mag_lo, mag_hi)),
        positivity_of_csu,
        findings,
        tolerance: tol,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// `sum_i <f, U f_i> S_UC^{-1} C f_i`
    pub first: Vec<Complex64>,
    /// `sum_i <f, S_UC^{-1} U f_i> C f_i`
    pub second: Vec<Complex64>,
    /// `||f - first|| / ||f||` and `||f - second|| / ||f||` (zero for `f = 0`).
    pub residuals: [f64; 2],
}

/// Reconstructs `f` through both controlled reconstruction formulas.
/// The second formula is exact only when `S_UC` is self-adjoint.
pub fn controlled_reconstruct(sys: &ControlledSystem, f: &[Complex64]) -> Result<Reconstruction> {
    if f.len() != sys.dim() {
        return Err(Error::LengthMismatch {
            expected: sys.dim(),
            found: f.len(),
        });
    }
    let s = controlled_frame_operator(sys);
    let inv = invertibility(&s);
    if !inv.invertible {
        return Err(Error::NotControlledFrame { ratio: inv.ratio() });
    }
    let uf = sys.u_images().synthesis_matrix();
    let cf = sys.c_images().synthesis_matrix();
    // S^{-1} C F and S^{-1} U F, column by column
    let s_inv_cf = solve(&s, &cf, "S_UC")?;
    let s_inv_uf = solve(&s, &uf, "S_UC")?;

    let d = sys.dim();
    let n = sys.family().len();
    let mut first = vec![Complex64::new(0.0, 0.0); d];
    let mut second = vec![Complex64::new(0.0, 0.0); d];
    for i in 0..n {
        let coeff1 = inner(f, &uf.column(i));
        let coeff2 = inner(f, &s_inv_uf.column(i));
        for r in 0..d {
            first[r] += coeff1 * s_inv_cf.get(r, i);
            second[r] += coeff2 * cf.get(r, i);
        }
    }
    let fnorm = norm2(f);
    let rel = |g: &[Complex64]| {
        let diff: Vec<Complex64> = f.iter().zip(g).map(|(a, b)| a - b).collect();
        if fnorm == 0.0 {
            norm2(&diff)
        } else {
            norm2(&diff) / fnorm
        }
    };
    let residuals = [rel(&first), rel(&second)];
    Ok(Reconstruction {
        first,
        second,
        residuals,
    })
}

/// `max_J sum_k |G[k][J]|^2`: the column bound obtained by feeding unit
/// coefficient vectors through the Gram operator. Never exceeds `op_norm^2`.
pub fn gram_row_bound(g: &GramData) -> f64 {
    let m = g.matrix();
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|k| m.get(k, j).norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `C^{-1} S_UC (U*)^{-1}`, which recovers the standard frame operator.
pub fn standard_operator_from_controlled(sys: &ControlledSystem) -> Result<ComplexMatrix> {
    let s = controlled_frame_operator(sys);
    // C^{-1} S
    let left = solve(sys.c(), &s, "C")?;
    // (C^{-1} S) (U*)^{-1} = ( U^{-1} (C^{-1} S)* )*
    let right = solve(sys.u(), &left.adjoint(), "U")?;
    Ok(right.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchattenReport {
    pub hs: f64,
    pub trace: f64,
    pub hs_squared: f64,
    /// `A ||(C* U)^{-1}||^{-2} sum ||f_k||^2`
    pub lower_chain: f64,
    /// `B ||C*||^2 ||U||^2 sum ||f_k||^2`
    pub upper_chain: f64,
    pub frame_lower: f64,
    pub frame_upper: f64,
}

impl SchattenReport {
    /// `lower_chain <= hs^2 <= upper_chain` up to a relative slack.
    pub fn chain_holds(&self, rel: f64) -> bool {
        let slack = rel * self.upper_chain.max(1.0);
        self.lower_chain <= self.hs_squared + slack && self.hs_squared <= self.upper_chain + slack
    }
}

pub fn schatten_report(sys: &ControlledSystem) -> SchattenReport {
    let g = controlled_gram_matrix(sys);
    let s = singular_values(&g);
    let hs = g.frobenius_norm();
    let (a, b) = frame_bounds(sys.family());
    let mass = sys.family().squared_norm_sum();
    let c_star_u = &sys.c().adjoint() * sys.u();
    // ||(C*U)^{-1}||^{-1} is the smallest singular value of C*U.
    let sigma_min = *singular_values(&c_star_u).last().unwrap();
    let c_norm = operator_norm(sys.c());
    let u_norm = operator_norm(sys.u());
    SchattenReport {
        hs,
        trace: s.iter().sum(),
        hs_squared: hs * hs,
        lower_chain: a.max(0.0) * sigma_min * sigma_min * mass,
        upper_chain: b * c_norm * c_norm * u_norm * u_norm * mass,
        frame_lower: a,
        frame_upper: b,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1LinfImage {
    pub image: Vec<Complex64>,
    pub sup_norm: f64,
    /// `sqrt(max_k sum_j |G[k][j]|^2)`
    pub row_constant: f64,
    pub l1_norm: f64,
    pub l2_norm: f64,
}

impl L1LinfImage {
    /// `sup_norm <= row_constant ||c||_2 <= row_constant ||c||_1`
    pub fn bound_holds(&self, rel: f64) -> bool {
        let b2 = self.row_constant * self.l2_norm;
        let b1 = self.row_constant * self.l1_norm;
        self.sup_norm <= b2 * (1.0 + rel) + rel && b2 <= b1 * (1.0 + rel) + rel
    }
}

/// Applies the Gram matrix to a coefficient sequence and measures the
/// l-infinity size of the result.
pub fn l1_linf_apply(g: &GramData, c: &[Complex64]) -> Result<L1LinfImage> {
    let m = g.matrix();
    let image = m.mul_vec(c)?;
    let sup_norm = image.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let row_constant = (0..m.rows())
        .map(|k| m.row(k).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max)
        .sqrt();
    Ok(L1LinfImage {
        image,
        sup_norm,
        row_constant,
        l1_norm: c.iter().map(|z| z.norm()).sum(),
        l2_norm: norm2(c),
    })
}
