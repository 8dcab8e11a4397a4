use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("inhomogeneous sum")]
    InhomogeneousSum,

    #[error("parse error at {line}:{column} in generator {generator}: {message}")]
    Parse {
        generator: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("empty scheme: the ideal is the unit ideal")]
    EmptyScheme,

    #[error("{0} out of range")]
    OutOfRange(String),

    #[error("fixed points defined for p-semilinear only")]
    NotPSemilinear,

    #[error("computation budget exceeded")]
    BudgetExceeded,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
