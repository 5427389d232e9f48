//! Exact sparse linear algebra: vectors, operators, matrices and seeded sampling.

pub mod matrix;
pub mod operator;
pub mod rng;
pub mod sparse;

pub use matrix::{ExactMatrix, RowReducer};
pub use operator::{adjoint_residual, LinearOperator};
pub use rng::{random_vector, BasisSampler, SplitMix64};
pub use sparse::SparseVector;
