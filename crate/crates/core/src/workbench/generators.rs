//! Generators for the alternating-sign example on `l^2` truncations and for
//! seeded random systems.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::controlled::ControlledSystem;
use crate::error::{Error, Result};
use crate::frame::FrameFamily;
use crate::linalg::{hermitian_eig, spectral_map, ComplexMatrix, HermitianEigen, Tolerances};
use crate::riesz::ControlledRieszSpec;
use crate::sampling::{random_conditioned, random_hermitian, random_unitary, random_vector};

/// Finite section of the alternating-sign system on `l^2` with `blocks`
/// 2x2 blocks (`d = 2 * blocks`):
/// `f_{2k+1} = e_{2k+1} - e_{2k+2}`, `f_{2k+2} = e_{2k+1} + e_{2k+2}`,
/// `C = diag(-1, 1, -1, 1, ...)`, `U = diag(1, -1, 1, -1, ...)`.
///
/// The operators are block diagonal, so the section is exact.
pub fn gen_example24(blocks: usize) -> Result<ControlledSystem> {
    if blocks == 0 {
        return Err(Error::Shape("at least one block is required".into()));
    }
    let d = 2 * blocks;
    let unit =
        |i: usize, s: f64| Complex64::new(s * if i.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
    let mut vectors = Vec::with_capacity(d);
    for b in 0..blocks {
        let (p, q) = (2 * b, 2 * b + 1);
        let mut minus = vec![Complex64::new(0.0, 0.0); d];
        minus[p] = Complex64::new(1.0, 0.0);
        minus[q] = Complex64::new(-1.0, 0.0);
        let mut plus = vec![Complex64::new(0.0, 0.0); d];
        plus[p] = Complex64::new(1.0, 0.0);
        plus[q] = Complex64::new(1.0, 0.0);
        vectors.push(minus);
        vectors.push(plus);
    }
    let c = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            unit(i, -1.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let u = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            unit(i, 1.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    ControlledSystem::new(FrameFamily::new(d, vectors)?, u, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenMode {
    /// Invertible non-Hermitian `U, C` and Gaussian vectors.
    General,
    /// `U, C` positive functions of one random Hermitian matrix; for `n >= d`
    /// the family's frame operator is a third such function, so `S_UC` is
    /// positive definite.
    CommutingPositive,
    /// Commuting positive `U, C` and `f_k = U^{-1} C M e_k` for a random
    /// bijective `M` (`n` is forced to `d`).
    RieszSpec,
}

impl FromStr for GenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Self::General),
            "commuting_positive" | "commuting-positive" => Ok(Self::CommutingPositive),
            "riesz_spec" | "riesz-spec" => Ok(Self::RieszSpec),
            other => Err(Error::Parse(format!("unknown generator mode `{other}`"))),
        }
    }
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::General => "general",
            Self::CommutingPositive => "commuting_positive",
            Self::RieszSpec => "riesz_spec",
        })
    }
}

/// Shared eigenbasis with the spectrum rescaled into `[-1, 1]`.
struct SharedCalculus {
    eig: HermitianEigen,
}

impl SharedCalculus {
    fn new(rng: &mut ChaCha8Rng, d: usize) -> Self {
        let h = random_hermitian(rng, d);
        let mut eig = hermitian_eig(&h, &Tolerances::default()).expect("Hermitian by construction");
        let scale = eig
            .values
            .iter()
            .map(|l| l.abs())
            .fold(0.0, f64::max)
            .max(1e-12);
        for l in &mut eig.values {
            *l /= scale;
        }
        Self { eig }
    }

    fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        spectral_map(&self.eig, f)
    }
}

/// `U = p(H)`, `C = q(H)` for the same Hermitian `H`.
pub fn commuting_positive_pair(rng: &mut ChaCha8Rng, d: usize) -> (ComplexMatrix, ComplexMatrix) {
    let calc = SharedCalculus::new(rng, d);
    (calc.apply(u_profile), calc.apply(c_profile))
}

// Positive on [-1, 1]: ranges [0.55, 1.83] and [0.75, 1.75].
fn u_profile(x: f64) -> f64 {
    (0.6 * x).exp()
}

fn c_profile(x: f64) -> f64 {
    1.0 + 0.5 * x + 0.25 * x * x
}

fn frame_profile(x: f64) -> f64 {
    1.0 + 0.5 * (3.0 * x).cos()
}

/// Commuting positive `U, C` and a random `M` with singular values in `[0.5, 2]`.
pub fn gen_riesz_spec(d: usize, seed: u64) -> Result<ControlledRieszSpec> {
    if d == 0 {
        return Err(Error::Shape("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u, c) = commuting_positive_pair(&mut rng, d);
    let m = random_conditioned(&mut rng, d, 0.5, 2.0);
    ControlledRieszSpec::new(u, c, m)
}

pub fn gen_random_system(d: usize, n: usize, seed: u64, mode: GenMode) -> Result<ControlledSystem> {
    if d == 0 || n == 0 {
        return Err(Error::Shape("dimension and count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        GenMode::General => {
            let u = random_conditioned(&mut rng, d, 0.5, 2.0);
            let c = random_conditioned(&mut rng, d, 0.5, 2.0);
            let vectors = (0..n).map(|_| random_vector(&mut rng, d)).collect();
            ControlledSystem::new(FrameFamily::new(d, vectors)?, u, c)
        }
        GenMode::CommutingPositive => {
            let calc = SharedCalculus::new(&mut rng, d);
            let u = calc.apply(u_profile);
            let c = calc.apply(c_profile);
            let family = if n >= d {
                // F = V diag(sqrt(s(x))) W with W W* = I, so F F* = s(H).
                let root = calc.apply(|x| frame_profile(x).sqrt());
                let w = random_unitary(&mut rng, n);
                let rows = ComplexMatrix::from_fn(d, n, |i, j| w.get(i, j));
                FrameFamily::from_columns(&(&root * &rows))
            } else {
                FrameFamily::new(d, (0..n).map(|_| random_vector(&mut rng, d)).collect())?
            };
            ControlledSystem::new(family, u, c)
        }
        GenMode::RieszSpec => gen_riesz_spec(d, seed)?.system(),
    }
}
