use thiserror::Error;

use crate::kernel::Vector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input points do not span 3-space (affine dimension {0})")]
    DegenerateInput(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("origin is not strictly interior to the polytope")]
    OriginNotInterior,
    #[error("direction {0:?} lies on the exceptional set")]
    ExceptionalDirection(Vector),
    #[error("polygon has fewer than 3 vertices")]
    DegeneratePolygon,
    #[error("sampling exhausted after {rejections} rejections in cell {cell}")]
    SamplingExhausted { cell: usize, rejections: usize },
    #[error("no feature permutation survives every sample in cell {cell}")]
    EmptyIntersection { cell: usize },
    #[error("edge vectors do not close up")]
    NotClosed,
    #[error("normals {0} and {1} point the same way")]
    ParallelNormals(usize, usize),
    #[error("polygon vertices would be irrational for these normals and lengths")]
    IrrationalPolygon,
    #[error("segment has zero length")]
    ZeroSegment,
    #[error("line passes through the origin")]
    OriginLine,
    #[error("direction {0:?} is orthogonal to a line")]
    DirectionOnLine(Vector),
    #[error("no global sign and translation verifies (conflicting cells {0} and {1})")]
    NoConsistentPatch(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Failures that may go away with more samples or another seed.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            Error::SamplingExhausted { .. } | Error::EmptyIntersection { .. } | Error::NoConsistentPatch(..)
        )
    }
}
