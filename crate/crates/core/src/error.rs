use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum GaborError {
    #[error("singular generator matrix (det = {det:e})")]
    SingularLattice { det: f64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("pole at lattice point {0}")]
    Pole(String),

    #[error("accuracy target not met: {0}")]
    Accuracy(String),

    #[error("density condition violated: (n+1)*s = {product} >= 1 (frame requires s < 1/(n+1))")]
    Density { product: f64 },

    #[error("integration domain too small: {0}")]
    TruncationDomain(String),

    #[error("unsupported Hermite order {order} (max {max})")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("divergent integral: growth exponent theta = {theta} must be < 1")]
    Divergence { theta: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GaborError>;
