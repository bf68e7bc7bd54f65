use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("ill-conditioned input: eigenvalue ratio {ratio:.3e} exceeds {limit:.0e}")]
    Conditioning { ratio: f64, limit: f64 },
    #[error("no convergence after {iterations} iterations (gradient norm {gradient_norm:.3e})")]
    NoConvergence {
        iterations: usize,
        gradient_norm: f64,
    },
    #[error("segment is not regular: {0}")]
    NotRegular(String),
    #[error("flags are not in general position: {0}")]
    Opposition(String),
    #[error("word {0} does not lie in the index-two subgroup")]
    Parity(String),
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
