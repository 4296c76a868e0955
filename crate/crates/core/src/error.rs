use thiserror::Error;

/// Errors shared across the library.
///
/// `BudgetExceeded` and `SizeGuard` are resource limits, reported loudly
/// instead of silently truncating. `TheoremViolation` is raised by the
/// consistency checks that instantiate the structural inequalities; it
/// signals either a bug or bad input data, never a tolerable condition.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("pair-reduction budget exceeded ({limit} reductions) during {operation}")]
    BudgetExceeded { operation: &'static str, limit: u64 },

    #[error("size guard exceeded: {what} would need {requested} generators (cap {cap})")]
    SizeGuard {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("layer bound {bound} exceeded: quotient is not cofinite at the given prime")]
    NotCofinite { bound: usize },

    #[error("theorem check failed: {0}")]
    TheoremViolation(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("exponent overflow: {0} exceeds 2^31")]
    ExponentOverflow(u64),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
