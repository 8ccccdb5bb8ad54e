use thiserror::Error;

/// Errors raised by the linear algebra, group and geometry layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degenerate pairing: rank {rank} on a {dim}-dimensional space")]
    DegeneratePairing { rank: usize, dim: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("not in the Lie algebra: {0}")]
    NotInAlgebra(String),

    #[error("direction not in the tangent space: {0}")]
    NotInTangentSpace(String),

    #[error("not in the group: {0}")]
    NotInGroup(String),

    #[error("element is not upper triangular (not in B)")]
    NotInBorel,

    #[error("not regular semisimple: {0}")]
    NotRegularSemisimple(String),

    #[error("ill-defined fiber: {0}")]
    IllDefinedFiber(String),

    #[error("linear system has no solution: {0}")]
    NoSolution(String),

    #[error("matrix is not skew-symmetric: {0}")]
    NotSkew(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
