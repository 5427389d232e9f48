//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::fock::Lattice;

/// Errors reported by operator constructors and checked entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Division of a scalar by zero.
    #[error("division by zero")]
    DivisionByZero,

    /// A scalar literal could not be parsed.
    #[error("invalid scalar literal `{0}`")]
    ParseScalar(String),

    /// An index is not part of the requested index lattice.
    #[error("index {index} is not part of the {lattice} lattice")]
    IndexNotInLattice { index: i64, lattice: Lattice },

    /// A state is not in canonical form (unsorted, repeated or misplaced indices).
    #[error("state is not canonical: {0}")]
    NonCanonicalState(String),

    /// A Clifford generator was requested for a pair with `i * j >= 0`.
    #[error("Clifford generator needs i*j < 0, got ({i}, {j})")]
    InvalidGammaPair { i: i64, j: i64 },

    /// An isotropy generator was requested for a pair with `i * j <= 0`.
    #[error("isotropy generator needs i*j > 0, got ({i}, {j})")]
    InvalidIsotropyPair { i: i64, j: i64 },

    /// An index lies outside the cut-off window `|index| <= n`.
    #[error("index {index} lies outside the cut-off window {n}")]
    OutOfWindow { index: i64, n: i64 },

    /// The support of a vector reaches further than the operation allows.
    #[error("vector support reaches index {support}, exceeding the allowed bound {limit}")]
    SupportTooLarge { support: i64, limit: i64 },

    /// A pairing block of an `o_res` element is not antisymmetric.
    #[error("the {0} block is not antisymmetric")]
    NotAntisymmetric(&'static str),

    /// The quadratic `o_res` representation only acts on particle states.
    #[error("expected a particle-only state, found antiparticle indices")]
    NotParticleOnly,

    /// A Casimir variant does not match the lattice or lacks a cut-off.
    #[error("invalid Casimir variant: {0}")]
    InvalidVariant(String),

    /// The Heisenberg generator index must be nonzero.
    #[error("Heisenberg generators need a nonzero index")]
    ZeroHeisenbergIndex,

    /// A vector expected to be invariant is not annihilated by the diagonal action.
    #[error("vector is not invariant: rho(E_{p},{q}) leaves a nonzero residual")]
    NotInvariant { p: i64, q: i64 },

    /// Matrix or vector dimensions disagree.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An internal consistency check failed.
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
