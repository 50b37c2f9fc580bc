use thiserror::Error;

/// Errors produced by the solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter combination the operation does not accept.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An iterative method failed to reach its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A bracketing search ran past its configured ceiling.
    #[error("not found: {0}")]
    NotFound(String),

    /// Quadrature could not meet the requested tolerance.
    #[error("quadrature tolerance not met: {0}")]
    ToleranceNotMet(String),

    /// A sampled function has (numerically) zero weighted norm.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Trial domain and profile describe different volumes.
    #[error("measure mismatch: domain {domain}, shell {shell}")]
    MeasureMismatch { domain: f64, shell: f64 },

    /// An index lies outside the range an identity is stated for.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// The eigenfunction derivative vanishes on an extended region.
    #[error("ambiguous profile classification: {0}")]
    AmbiguousClassification(String),

    /// Two independent determinations of a threshold disagree.
    #[error("cross-validation mismatch: {0}")]
    CrossValidation(String),

    /// A configured enumeration ceiling was reached.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
