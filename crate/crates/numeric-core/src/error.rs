use thiserror::Error;

/// Errors raised by the numeric substrate.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value produced by {context}")]
    NonFinite { context: String },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("loss must be a 1x1 scalar, got {rows}x{cols}")]
    NonScalarLoss { rows: usize, cols: usize },

    #[error("singular linear system in {context}")]
    SingularSystem { context: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
