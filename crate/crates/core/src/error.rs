use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cover relation has a cycle through {0}")]
    CycleDetected(String),
    #[error("duplicate point {0:?}")]
    DuplicatePoint(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("invalid point name {0:?}")]
    InvalidPointName(String),
    #[error("space has {0} points, at most {max} supported", max = crate::space::MAX_POINTS)]
    TooManyPoints(usize),
    #[error("subset is not locally closed: {0}")]
    NotLocallyClosed(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("quotient is not free: {0}")]
    QuotientNotFree(String),

    #[error("incomplete module: {0}")]
    ShapeIncomplete(String),
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("space is not a unique path space: {0}")]
    SpaceNotUniquePath(String),
    #[error("space is not an EBP space: {0}")]
    SpaceNotEBP(String),
    #[error("input module is not exact: {0}")]
    InputNotExact(String),
    #[error("input module is invalid: {0}")]
    InvalidModule(String),
    #[error("freeness hypothesis fails: {0}")]
    FreenessHypothesisFailed(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
