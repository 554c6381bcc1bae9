//! Controlled frames in finite-dimensional complex Hilbert spaces.
//!
//! A family `{f_k}` in `C^d` is a `(U, C)`-controlled frame when
//! `A ||f||^2 <= sum_k <f, U f_k> <C f_k, f> <= B ||f||^2` for invertible
//! controllers `U` and `C`. The crate computes the controlled frame operator
//! and controlled Gram matrix, diagnoses controlled Bessel/frame/Riesz
//! behaviour, and constructs controlled Riesz bases `{U^{-1} C M e_k}` with
//! their duals.
//!
//! Modules, bottom up:
//! - [`linalg`]: dense complex kernel (Jacobi eigen/SVD, polar, square roots).
//! - [`frame`]: standard frame machinery.
//! - [`controlled`]: controlled frame operator, Gram data and diagnostics.
//! - [`riesz`]: controlled Riesz bases, duals and the Gram criterion.
//! - [`workbench`]: documents, generators and the diagnostic battery.

pub mod controlled;
pub mod error;
pub mod frame;
pub mod linalg;
pub mod riesz;
pub mod sampling;
pub mod workbench;

pub use controlled::ControlledSystem;
pub use error::{Error, Result};
pub use frame::FrameFamily;
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
pub use riesz::ControlledRieszSpec;
