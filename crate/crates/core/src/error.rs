use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}: |b| must be at least 2")]
    InvalidBase(String),
    #[error("coefficient list has {got} entries, expected m = {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("exponent s must be at least 1, got {0}")]
    BadExponent(u32),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero")]
    DivideByZero,
    #[error("square root of a negative operand")]
    NegativeOperand,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("parameter n = {n} is below the family minimum {n_min}")]
    ParameterTooSmall { n: u64, n_min: u64 },
    #[error("only s = 1 formulas are supported here, got s = {0}")]
    UnsupportedExponent(u32),
    #[error("formulas differ in shape: {0}")]
    ShapeMismatch(String),
    #[error("digit boundary hazard at guard = {guard}: retry with more guard digits")]
    BoundaryHazard { guard: u32 },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
