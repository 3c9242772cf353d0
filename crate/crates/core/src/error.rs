use thiserror::Error;

/// Errors raised by the algebra layers and the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different quadratic fields")]
    MixedFieldSpecs,
    #[error("polynomial rings do not match: {0}")]
    RingMismatch(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no image given for variable `{0}`")]
    MissingImage(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable set: {0}")]
    InvalidVarSet(String),
    #[error("reduction budget of {0} steps exceeded")]
    BudgetExceeded(u64),
    #[error("point does not lie on {0}")]
    PointNotOnVariety(String),
    #[error("compatibility failure: {0}")]
    CompatibilityFailure(String),
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("ring map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
