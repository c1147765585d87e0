use thiserror::Error;

/// Errors produced by chart calculus, frame construction and the suite runner.
#[derive(Debug, Error)]
pub enum GeomError {
    /// A finite-difference stencil would leave the chart domain.
    #[error("point violates boundary margin along axis {axis}: stencil reach {reach:.3e} leaves the chart domain")]
    BoundaryMargin { axis: usize, reach: f64 },

    /// Gram-Schmidt hit a pivot below the degeneracy threshold.
    #[error("degenerate frame seed at index {index}: Gram-Schmidt pivot {pivot:.3e} below {threshold:.1e}; supply a different seed basis")]
    DegenerateSeed {
        index: usize,
        pivot: f64,
        threshold: f64,
    },

    /// Structure validation failed at a sample point.
    #[error("structure validation failed at point {point:?}: {detail}")]
    InvalidStructure { point: Vec<f64>, detail: String },

    /// A geometry table required by an identity was not supplied.
    #[error("identity {code} requires table `{table}`, which is missing")]
    MissingTable { code: String, table: String },

    #[error("unknown manifold `{0}`")]
    UnknownManifold(String),

    #[error("unknown identity code `{0}`")]
    UnknownIdentity(String),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GeomError>;
