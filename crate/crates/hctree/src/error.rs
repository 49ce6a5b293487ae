use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state index {index} out of range for a graph with {num_states} states")]
    StateOutOfRange { index: usize, num_states: usize },

    #[error("unknown graph name `{0}` (expected stick, key or two-state)")]
    UnknownGraph(String),

    #[error("graph has {got} states, operation requires {expected}")]
    WrongStateCount { expected: usize, got: usize },

    #[error("argument {value} outside domain: {reason}")]
    Domain { value: f64, reason: &'static str },

    #[error("zero denominator in boundary-law map")]
    ZeroDenominator,

    #[error("fixed-point iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("discriminant negative at k={0}; extrema exist only for k >= 4")]
    NegativeDiscriminant(u32),

    #[error("no critical points at k={0}; unique measure for all lambda")]
    NoCriticalPoints(u32),

    #[error("bracket endpoints do not have opposite signs")]
    CertificateViolated,

    #[error("zero polynomial has no Descartes bound")]
    ZeroPolynomial,

    #[error("finite volume too large: |V_n| = {actual} exceeds guard {guard}")]
    SizeGuard { actual: usize, guard: usize },

    #[error("subgroup parameter i={i} invalid for k={k}; need 1 <= i <= k+1")]
    LabelingInfeasible { i: u32, k: u32 },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
