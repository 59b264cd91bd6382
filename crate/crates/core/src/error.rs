use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("vertex {vertex} out of range (network has {count} vertices)")]
    InvalidVertex { vertex: usize, count: usize },
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} out of range (dimension {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("constant-term matrix of a series matrix is singular")]
    SeriesConstantTermSingular,
    #[error("walk generating function diverges (spectral radius bound {radius})")]
    Divergent { radius: f64 },
    #[error("interior vertex {vertex} cannot reach the boundary")]
    AbsorbingInterior { vertex: usize },
    #[error("source and target sets are not disjoint: {0}")]
    NotDisjoint(String),
    #[error("size mismatch: {left} sources vs {right} targets")]
    SizeMismatch { left: usize, right: usize },
    #[error("vertex {0} is not a boundary vertex")]
    NotBoundary(usize),
    #[error("drift condition violated: p = {0} must exceed 1/2")]
    DriftViolation(String),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("ordering requirement violated: {0}")]
    OrderingError(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// True for errors that signal a broken internal self-check rather than
    /// bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
