//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by oracle constructors, feasible sets and solvers.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A scalar argument is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two vectors that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The starting point is not a member of the feasible set.
    #[error("starting point is not feasible")]
    InfeasibleStart,

    /// The doubling line search hit its cap without finding an acceptable
    /// constant. This signals an oracle violating its certificate.
    #[error("line search exhausted after {cap} doublings at iteration {iteration}")]
    LineSearchExhausted { iteration: usize, cap: usize },

    /// A step-size rule that divides by the gradient norm was queried at a
    /// point with zero gradient. Callers treat this as successful
    /// termination at an optimal point.
    #[error("zero gradient: the current point satisfies the optimality condition")]
    ZeroGradient,

    /// A duality-gap evaluation was requested for a problem without one.
    #[error("no gap evaluator available for this problem")]
    MissingGapEvaluator,

    /// A user-supplied inner prox solver reported failure.
    #[error("inner prox solver failed: {0}")]
    InnerSolver(String),

    /// A problem file could not be parsed.
    #[error("malformed problem file: {0}")]
    MalformedProblemFile(String),
}

impl CoreError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        CoreError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
