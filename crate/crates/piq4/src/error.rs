//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Square root of a negative rational was requested.
    #[error("cannot take the square root of the negative rational {0}")]
    NegativeSqrt(String),

    /// A squarefree radicand exceeded the fixed-width storage limit.
    #[error("radicand {0} does not fit in 64 bits after normalization")]
    RadicandOverflow(String),

    /// An operation required an odd local dimension.
    #[error("local dimension q = {0} must be odd for this construction")]
    ExpectedOddQ(u32),

    /// An operation required an even local dimension.
    #[error("local dimension q = {0} must be even for this construction")]
    ExpectedEvenQ(u32),

    /// The local dimension cannot hold a logical qudit.
    #[error("local dimension q = {0} is below the minimum of 2")]
    QTooSmall(u32),

    /// Occupation data inconsistent with the ambient space.
    #[error("occupation vector {vector} does not match n = {n}, q = {q}")]
    OccupationMismatch { vector: String, n: u32, q: u32 },

    /// Dense expansion was requested beyond the configured size guard.
    #[error("dense oracle guard: q = {q} exceeds the configured maximum {max}")]
    OracleGuardExceeded { q: u32, max: u32 },

    /// Enumerator length outside the hardcoded transform table.
    #[error("no enumerator transform is available for n = {0}; supported: 1, 2, 3")]
    UnsupportedEnumeratorLength(usize),

    /// The two independent feasibility solvers returned different verdicts.
    #[error("solver disagreement for (n = {n}, q = {q}, K = {k}): direct says {direct}, elimination says {generic}")]
    SolverDisagreement {
        n: usize,
        q: u64,
        k: u64,
        direct: &'static str,
        generic: &'static str,
    },

    /// The transcribed derivation cannot handle the requested variant.
    #[error("the direct derivation does not cover n = {n} with the adjoint equality dropped")]
    DirectPathUnsupported { n: usize },

    /// A balancing system has no nonnegative normalized solution.
    #[error("packet balancing system is infeasible: {0}")]
    BalancingInfeasible(String),

    /// A nonexistence sweep met a feasible system where infeasibility is
    /// required.
    #[error("enumerator system (n = {n}, q = {q}) is unexpectedly feasible")]
    UnexpectedFeasible { n: usize, q: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
