//! Exact algebra for a generalized Dirac operator on a semi-infinite wedge module.
//!
//! The crate is organized bottom-up: [`scalar`] and [`linalg`] provide exact
//! arithmetic over ℚ(√2), [`fock`] and [`spinor`] implement the two tensor
//! factors, [`casimir`] the Casimir and Heisenberg operators on the wedge
//! module, and [`dirac`] the cubic Dirac operator, its square and its kernel.

pub mod casimir;
pub mod dirac;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod scalar;
pub mod spinor;
pub mod suites;

pub use error::{Error, Result};
pub use scalar::Scalar;
