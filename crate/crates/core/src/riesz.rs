//! `(U, C)`-controlled Riesz bases `{U^{-1} C M e_k}`: construction, the two
//! canonical duals, controlled biorthogonality, the coefficient-space
//! quadratic form `|<sum c_k U f_k, sum c_k C f_k>|` and the Gram-based
//! Riesz diagnosis with constructive recovery of `M`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::controlled::{controlled_gram, ControlledSystem};
use crate::error::{Error, Result};
use crate::frame::{is_complete, FrameFamily};
use crate::linalg::{
    hermitian_eig, inner, inverse, invertibility, positivity_check, self_adjoint_residual, solve,
    ComplexMatrix, Tolerances,
};
use crate::sampling::random_unit_vector;

/// Number of unit coefficient vectors used when the quadratic form is not
/// Hermitian and its modulus range has to be sampled.
pub const FORM_SAMPLES: usize = 10_000;
pub const DEFAULT_SAMPLING_SEED: u64 = 0x5eed_f0e1;

/// Data `(U, C, M, E)` defining the family `f_k = U^{-1} C M e_k`, where
/// `e_k` is column `k` of the unitary `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledRieszSpec {
    u: ComplexMatrix,
    c: ComplexMatrix,
    m: ComplexMatrix,
    basis: ComplexMatrix,
}

impl ControlledRieszSpec {
    pub fn new(u: ComplexMatrix, c: ComplexMatrix, m: ComplexMatrix) -> Result<Self> {
        let d = u.ensure_square()?;
        Self::with_basis(u, c, m, ComplexMatrix::identity(d))
    }

    pub fn with_basis(
        u: ComplexMatrix,
        c: ComplexMatrix,
        m: ComplexMatrix,
        basis: ComplexMatrix,
    ) -> Result<Self> {
        let d = u.ensure_square()?;
        for (name, op) in [("C", &c), ("M", &m), ("E", &basis)] {
            if op.rows() != d || op.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {d}x{d}",
                    op.rows(),
                    op.cols()
                )));
            }
        }
        for (name, op) in [("U", &u), ("C", &c)] {
            let inv = invertibility(op);
            if !inv.invertible {
                return Err(Error::NotInvertible {
                    what: name.to_string(),
                    ratio: inv.ratio(),
                });
            }
        }
        let inv = invertibility(&m);
        if !inv.invertible {
            return Err(Error::NotBijective { ratio: inv.ratio() });
        }
        let defect = (&basis.adjoint() * &basis).max_abs_diff(&ComplexMatrix::identity(d))?;
        if defect > 1e-10 {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Self { u, c, m, basis })
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn m(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    /// The controlled system `({f_k}, U, C)` this spec generates.
    pub fn system(&self) -> Result<ControlledSystem> {
        ControlledSystem::new(
            build_controlled_riesz(self)?,
            self.u.clone(),
            self.c.clone(),
        )
    }
}

/// `f_k = U^{-1} C M e_k`
pub fn build_controlled_riesz(spec: &ControlledRieszSpec) -> Result<FrameFamily> {
    let cme = &(&spec.c * &spec.m) * &spec.basis;
    Ok(FrameFamily::from_columns(&solve(&spec.u, &cme, "U")?))
}

/// `g_k = U* (C^{-1})* (M^{-1})* e_k`, giving
/// `f = sum <f, g_k> f_k = sum <f, f_k> g_k`.
pub fn dual_type1(spec: &ControlledRieszSpec) -> Result<FrameFamily> {
    let c_inv = inverse(&spec.c, "C")?;
    let m_inv = inverse(&spec.m, "M").map_err(not_bijective)?;
    let g = &(&(&spec.u.adjoint() * &c_inv.adjoint()) * &m_inv.adjoint()) * &spec.basis;
    Ok(FrameFamily::from_columns(&g))
}

/// `g_k = U^{-1} (C^{-1})* U* (C^{-1})* (M^{-1})* e_k`, giving
/// `f = sum <f, U g_k> C f_k = sum <f, C f_k> U g_k`.
pub fn dual_type2(spec: &ControlledRieszSpec) -> Result<FrameFamily> {
    let c_inv_adj = inverse(&spec.c, "C")?.adjoint();
    let m_inv = inverse(&spec.m, "M").map_err(not_bijective)?;
    let tail =
        &(&(&(&c_inv_adj * &spec.u.adjoint()) * &c_inv_adj) * &m_inv.adjoint()) * &spec.basis;
    Ok(FrameFamily::from_columns(&solve(&spec.u, &tail, "U")?))
}

fn not_bijective(e: Error) -> Error {
    match e {
        Error::NotInvertible { ratio, .. } => Error::NotBijective { ratio },
        other => other,
    }
}

/// `max_{k,j} |<C f_k, U g_j> - delta_kj|`
pub fn biorthogonality_defect(
    f: &FrameFamily,
    g: &FrameFamily,
    u: &ComplexMatrix,
    c: &ComplexMatrix,
) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "families live in C^{} and C^{}",
            f.dim(),
            g.dim()
        )));
    }
    let cf = f.map(c)?;
    let ug = g.map(u)?;
    let mut worst: f64 = 0.0;
    for k in 0..f.len() {
        for j in 0..g.len() {
            let delta = if k == j { 1.0 } else { 0.0 };
            let v = inner(cf.vector(k), ug.vector(j)) - Complex64::new(delta, 0.0);
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFormBounds {
    /// Lower constant: `min |lambda(Q)|` (exact) or the sampled minimum.
    pub lower: f64,
    /// Upper constant: `max |lambda(Q)|` (exact) or the sampled maximum.
    pub upper: f64,
    pub hermitian_residual: f64,
    /// All eigenvalues of `Q` share one strict sign.
    pub sign_definite: bool,
    /// Bounds come from sampling the numerical range rather than eigenvalues.
    pub sampled: bool,
    pub eigenvalues: Vec<f64>,
}

/// Form matrix `Q[j][k] = <U f_k, C f_j>`, so that
/// `<sum c_k U f_k, sum c_k C f_k> = <Q c, c>`.
pub fn form_matrix(sys: &ControlledSystem) -> ComplexMatrix {
    let uf = sys.u_images();
    let cf = sys.c_images();
    let n = sys.family().len();
    ComplexMatrix::from_fn(n, n, |j, k| inner(uf.vector(k), cf.vector(j)))
}

/// `<Q c, c>`
pub fn form_value(q: &ComplexMatrix, c: &[Complex64]) -> Complex64 {
    inner(&q.mul_vec(c).expect("coefficient length"), c)
}

pub fn quadratic_form_bounds(sys: &ControlledSystem, tol: f64) -> QuadraticFormBounds {
    quadratic_form_bounds_seeded(sys, tol, DEFAULT_SAMPLING_SEED)
}

/// As [`quadratic_form_bounds`], with an explicit seed for the sampled
/// fallback used when `Q` is not Hermitian.
pub fn quadratic_form_bounds_seeded(
    sys: &ControlledSystem,
    tol: f64,
    seed: u64,
) -> QuadraticFormBounds {
    let q = form_matrix(sys);
    let residual = self_adjoint_residual(&q).expect("square");
    if residual <= tol {
        let eig = hermitian_eig(&q.hermitian_part(), &Tolerances::uniform(tol)).expect("Hermitian");
        let lo = eig.values[0];
        let hi = *eig.values.last().unwrap();
        let lower = eig
            .values
            .iter()
            .map(|l| l.abs())
            .fold(f64::INFINITY, f64::min);
        let upper = eig.values.iter().map(|l| l.abs()).fold(0.0, f64::max);
        return QuadraticFormBounds {
            lower,
            upper,
            hermitian_residual: residual,
            sign_definite: lo > tol || hi < -tol,
            sampled: false,
            eigenvalues: eig.values,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = q.rows();
    let (mut lower, mut upper) = (f64::INFINITY, 0.0f64);
    for _ in 0..FORM_SAMPLES {
        let c = random_unit_vector(&mut rng, n);
        let v = form_value(&q, &c).norm();
        lower = lower.min(v);
        upper = upper.max(v);
    }
    QuadraticFormBounds {
        lower,
        upper,
        hermitian_residual: residual,
        sign_definite: false,
        sampled: true,
        eigenvalues: Vec::new(),
    }
}

/// `M` with `M e_k = C^{-1} U f_k`, defined for square families.
pub fn recover_m(sys: &ControlledSystem) -> Option<ComplexMatrix> {
    if sys.family().len() != sys.dim() {
        return None;
    }
    let uf = sys.u_images().synthesis_matrix();
    solve(sys.c(), &uf, "C").ok()
}

/// `U, C` in `GL+` and commuting within `tol` (relative to `||U|| ||C||`).
pub fn controller_hypotheses_hold(u: &ComplexMatrix, c: &ComplexMatrix, tol: f64) -> bool {
    let positive = |m: &ComplexMatrix| {
        positivity_check(m, tol)
            .map(|p| p.in_gl_plus)
            .unwrap_or(false)
    };
    if !positive(u) || !positive(c) {
        return false;
    }
    let comm = u.commutator(c).expect("square").max_abs();
    comm <= tol * (u.max_abs() * c.max_abs()).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszDiagnosis {
    pub lower: f64,
    pub upper: f64,
    pub form_sampled: bool,
    pub form_sign_definite: bool,
    pub form_hermitian_residual: f64,
    pub complete: bool,
    pub gram_invertible: bool,
    pub gram_condition: f64,
    pub is_controlled_riesz: bool,
    /// Reconstructed `M`, present when the family is a controlled Riesz basis.
    #[serde(skip)]
    pub recovered_m: Option<ComplexMatrix>,
    /// `M e_k = C^{-1} U f_k` is square and invertible (checked independently
    /// of the Gram verdict).
    pub recovered_m_invertible: bool,
    /// Against `dual_type2` of the recovered spec.
    pub biorthogonality_defect: Option<f64>,
    /// `U, C` in `GL+` and commuting: the setting in which the Gram criterion
    /// is an equivalence.
    pub hypotheses_hold: bool,
    pub tolerance: f64,
}

pub fn riesz_diagnose(sys: &ControlledSystem, tol: f64) -> RieszDiagnosis {
    riesz_diagnose_seeded(sys, tol, DEFAULT_SAMPLING_SEED)
}

pub fn riesz_diagnose_seeded(sys: &ControlledSystem, tol: f64, seed: u64) -> RieszDiagnosis {
    let form = quadratic_form_bounds_seeded(sys, tol, seed);
    let complete = is_complete(sys.family());
    let gram = controlled_gram(sys);
    let gram_invertible = gram.op_norm > 0.0 && gram.min_singular > tol * gram.op_norm;
    let is_controlled_riesz = complete && gram_invertible;

    let m = recover_m(sys);
    let recovered_m_invertible = m.as_ref().is_some_and(|m| invertibility(m).invertible);

    let mut recovered_m = None;
    let mut biorthogonality = None;
    if is_controlled_riesz {
        if let Some(m) = m {
            if let Ok(spec) = ControlledRieszSpec::new(sys.u().clone(), sys.c().clone(), m.clone())
            {
                biorthogonality = dual_type2(&spec)
                    .and_then(|g| biorthogonality_defect(sys.family(), &g, sys.u(), sys.c()))
                    .ok();
            }
            recovered_m = Some(m);
        }
    }

    RieszDiagnosis {
        lower: form.lower,
        upper: form.upper,
        form_sampled: form.sampled,
        form_sign_definite: form.sign_definite,
        form_hermitian_residual: form.hermitian_residual,
        complete,
        gram_invertible,
        gram_condition: if gram.min_singular > 0.0 {
            gram.op_norm / gram.min_singular
        } else {
            f64::INFINITY
        },
        is_controlled_riesz,
        recovered_m,
        recovered_m_invertible,
        biorthogonality_defect: biorthogonality,
        hypotheses_hold: controller_hypotheses_hold(sys.u(), sys.c(), tol),
        tolerance: tol,
    }
}

/// Rebuilds the family from the recovered `M` and reports the largest entry
/// deviation; `None` when `M` cannot be recovered or is not bijective.
pub fn round_trip_defect(sys: &ControlledSystem) -> Option<f64> {
    let m = recover_m(sys)?;
    let spec = ControlledRieszSpec::new(sys.u().clone(), sys.c().clone(), m).ok()?;
    let rebuilt = build_controlled_riesz(&spec).ok()?;
    rebuilt
        .synthesis_matrix()
        .max_abs_diff(&sys.family().synthesis_matrix())
        .ok()
}
