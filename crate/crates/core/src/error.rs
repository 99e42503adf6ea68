use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside the evaluation domain [0, {cap}]")]
    Domain { value: f64, cap: f64 },

    #[error("value {value} outside the attainable range [0, {max}]")]
    Range { value: f64, max: f64 },

    #[error("degenerate Young function: {0}")]
    Degenerate(String),

    #[error("invalid Young function: {0}")]
    InvalidYoung(String),

    #[error("unknown or unsupported group spec `{0}`")]
    UnknownGroup(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("exact oracle limited to groups of order <= {limit}, got {order}")]
    OracleSize { order: usize, limit: usize },

    #[error("atoms are not generated by a single convolution measure (residual {0:e})")]
    NotConvolution(f64),

    #[error("ratio undefined for the zero function")]
    UndefinedRatio,

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
