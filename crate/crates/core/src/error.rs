use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("radicand {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("singular linear system")]
    SingularSystem,
    #[error("axis {index} is not positive")]
    InvalidAxis { index: usize },
    #[error("polytope is unbounded along coordinate {0}")]
    Unbounded(usize),
    #[error("scan budget of {budget} points exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("inadmissible dilation: {0}")]
    Inadmissible(String),
    #[error("interpolation degenerate: {0}")]
    InterpolationDegenerate(String),
}
