//! JSON system documents: a family of vectors (rows) and optional controller
//! matrices, every complex number written as an `[re, im]` pair.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::controlled::ControlledSystem;
use crate::error::{Error, Result};
use crate::frame::FrameFamily;
use crate::linalg::{invertibility, ComplexMatrix};

pub type Pair = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub dim: usize,
    /// One row per family member, `dim` pairs each.
    pub vectors: Vec<Vec<Pair>>,
    /// Row-major `dim x dim`; identity when absent.
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Vec<Pair>>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn to_pair(z: &Complex64) -> Pair {
    [z.re, z.im]
}

fn rows_of(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(to_pair).collect())
        .collect()
}

fn check_finite(rows: &[Vec<Pair>], what: &str) -> Result<()> {
    if rows.iter().flatten().flatten().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Shape(format!("{what} contains non-finite numbers")))
    }
}

fn square_from_rows(rows: &[Vec<Pair>], dim: usize, what: &str) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Shape(format!("{what} must be {dim}x{dim}")));
    }
    check_finite(rows, what)?;
    let data = rows
        .iter()
        .flatten()
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    ComplexMatrix::new(dim, dim, data)
}

impl SystemDocument {
    pub fn from_system(sys: &ControlledSystem) -> Self {
        Self {
            dim: sys.dim(),
            vectors: sys
                .family()
                .vectors()
                .iter()
                .map(|v| v.iter().map(to_pair).collect())
                .collect(),
            u: Some(rows_of(sys.u())),
            c: Some(rows_of(sys.c())),
            tolerances: None,
            seed: None,
        }
    }

    /// Validates shapes, finiteness and invertibility of the controllers.
    pub fn to_system(&self) -> Result<ControlledSystem> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::Shape("dim must be positive".into()));
        }
        if self.vectors.is_empty() {
            return Err(Error::Shape("vectors must not be empty".into()));
        }
        if let Some(k) = self.vectors.iter().position(|v| v.len() != d) {
            return Err(Error::Shape(format!(
                "vector {k} has {} entries, expected {d}",
                self.vectors[k].len()
            )));
        }
        check_finite(&self.vectors, "vectors")?;
        let family = FrameFamily::new(
            d,
            self.vectors
                .iter()
                .map(|v| v.iter().map(|p| Complex64::new(p[0], p[1])).collect())
                .collect(),
        )?;
        let load = |rows: &Option<Vec<Vec<Pair>>>, what: &str| -> Result<ComplexMatrix> {
            let m = match rows {
                Some(rows) => square_from_rows(rows, d, what)?,
                None => ComplexMatrix::identity(d),
            };
            let inv = invertibility(&m);
            if !inv.invertible {
                return Err(Error::NotInvertible {
                    what: what.to_string(),
                    ratio: inv.ratio(),
                });
            }
            Ok(m)
        };
        let u = load(&self.u, "U")?;
        let c = load(&self.c, "C")?;
        ControlledSystem::new(family, u, c)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// SHA-256 of the compact serialization of the numeric payload
    /// (`dim`, `vectors`, `U`, `C`).
    pub fn digest(&self) -> String {
        let payload = Self {
            tolerances: None,
            seed: None,
            ..self.clone()
        };
        let bytes = serde_json::to_vec(&payload).expect("document serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn tolerance_override(&self) -> Option<f64> {
        self.tolerances.and_then(|t| t.tol)
    }
}

pub fn read_document(path: &Path) -> Result<SystemDocument> {
    let text = std::fs::read_to_string(path)?;
    SystemDocument::parse(&text)
}

/// Reads and validates a system document. `U` and `C` default to the identity.
pub fn load_system(path: &Path) -> Result<ControlledSystem> {
    read_document(path)?.to_system()
}

pub fn save_system(sys: &ControlledSystem, path: &Path) -> Result<()> {
    std::fs::write(path, SystemDocument::from_system(sys).to_json())?;
    Ok(())
}
