use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] numeric_core::CoreError),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular similarity: zero off-diagonal distance at ({i}, {j}) with negative exponent")]
    ZeroDistanceSingularity { i: usize, j: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid pipeline: {0}")]
    InvalidPipeline(String),

    #[error("eigen iteration did not converge: residual {residual} after {iterations} iterations")]
    EigenNotConverged { residual: f64, iterations: usize },
}

pub type Result<T> = std::result::Result<T, SimError>;
