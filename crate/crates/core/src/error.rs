use thiserror::Error;

/// Failures raised by the solvers and their inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n must be at least 1")]
    EmptyGraph,
    #[error("d must be at least 1")]
    NoWeights,
    #[error("expected {expected} weight matrices, got {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("weight matrix {index} is not {n}x{n}")]
    MatrixShape { index: usize, n: usize },
    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("not a permutation of 0..{n}: {detail}")]
    NotAPermutation { n: usize, detail: String },
    #[error("partial assignment is not a matching: {0}")]
    NotAMatching(String),
    #[error("n = {n} exceeds the brute-force cap of {cap}")]
    BruteForceCap { n: usize, cap: usize },
    #[error("fiber enumeration supports n <= {max_n} and d <= {max_d}, got n = {n}, d = {d}")]
    EnumerationBounds { n: usize, d: usize, max_n: usize, max_d: usize },
    #[error("edge directions need n >= 2, got {0}")]
    TooFewVertices(usize),
    #[error("fiber of {0} is empty")]
    FiberEmpty(String),
    #[error("fiber of {0} returned a fractional vertex")]
    NonIntegralVertex(String),
    #[error("weights must be nonnegative")]
    NegativeWeights,
    #[error("lp norm exponent must be a positive integer or infinity")]
    InvalidExponent,
    #[error("{required} interpolation nodes needed, cap is {cap}")]
    ScaleGuard { required: String, cap: usize },
    #[error("determinant support came back empty")]
    EmptySupport,
    #[error("no grid point yielded a permutation vertex")]
    Exhausted,
    #[error("substitution entries must lie in 1..={s}")]
    SubstitutionRange { s: u64 },
    #[error("at least one trial is required")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
