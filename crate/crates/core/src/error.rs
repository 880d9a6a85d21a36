use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("search direction is not a descent direction (g'p = {0:e})")]
    NotDescentDirection(f64),

    #[error("curvature condition violated (s'y = {sy:e})")]
    CurvatureViolation { sy: f64 },

    #[error("zero search direction")]
    ZeroDirection,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown problem {name:?}{}", format_suggestions(.suggestions))]
    UnknownProblem {
        name: String,
        suggestions: Vec<String>,
    },

    #[error("incomplete records: problem {problem:?} has no record for solver {solver:?}")]
    IncompleteRecords { problem: String, solver: String },

    #[error("iteration count of {solver} on {problem:?} changed between runs")]
    Nondeterministic { problem: String, solver: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_suggestions(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!("; did you mean: {}?", suggestions.join(", "))
    }
}
