use thiserror::Error;

/// Errors raised by the kernel, the frame/controlled-frame machinery and the
/// workbench document layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: relative residual {residual:e} exceeds {tol:e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("operator is not positive: smallest eigenvalue {lambda_min:e} below -{tol:e}")]
    NotPositive { lambda_min: f64, tol: f64 },

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entries must be finite")]
    NonFinite,

    #[error("{what} is not invertible (smallest/largest singular value {ratio:e})")]
    NotInvertible { what: String, ratio: f64 },

    #[error("operator M is not bijective (smallest/largest singular value {ratio:e})")]
    NotBijective { ratio: f64 },

    #[error(
        "controlled frame operator is not invertible (smallest/largest singular value {ratio:e})"
    )]
    NotControlledFrame { ratio: f64 },

    #[error("basis is not orthonormal: defect {defect:e}")]
    NotOrthonormal { defect: f64 },

    #[error("family must contain at least one vector")]
    EmptyFamily,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
