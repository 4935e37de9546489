use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty point cloud")]
    EmptyCloud,
    #[error("degenerate bounding box: all points are identical")]
    DegenerateBounds,
    #[error("precision {0} outside the supported range [1, 16]")]
    InvalidPrecision(u8),
    #[error("invalid point cloud: {0}")]
    InvalidCloud(String),
    #[error("k = {k} exceeds the number of points ({points})")]
    NotEnoughPoints { k: usize, points: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u8, u8),
    #[error("no normals available and estimation disabled")]
    MissingNormals,
    #[error("nothing projected")]
    NothingProjected,
    #[error("padding needs at least one occupied pixel")]
    EmptyPaddingMask,
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("image too small: {rows}x{cols}, need at least {min}x{min}")]
    ImageTooSmall { rows: usize, cols: usize, min: usize },
    #[error("occupancy mismatch in {branch} branch, plane {plane}")]
    OccupancyMismatch { branch: &'static str, plane: &'static str },
    #[error("incomplete view set for {0}")]
    IncompleteViewSet(String),
    #[error("duplicate score row for {0}")]
    DuplicateScore(String),
    #[error("missing score for {0}")]
    MissingScore(String),
    #[error("non-finite score for {0}")]
    NonFiniteScore(String),
    #[error("degenerate branch scores: design matrix is rank deficient")]
    DegenerateBranchScores,
    #[error("constant objective scores: {0}")]
    ConstantScores(String),
    #[error("not enough samples: need {needed}, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

impl Error {
    /// True for errors signalling a broken internal invariant rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::OccupancyMismatch { .. })
    }
}
