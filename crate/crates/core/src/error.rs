use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("universe must have at least one element")]
    EmptyUniverse,

    #[error("universe of {size} elements exceeds the limit of {limit}")]
    UniverseTooLarge { size: usize, limit: usize },

    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("element index {index} out of range for a universe of {size}")]
    ElementOutOfRange { index: usize, size: usize },

    #[error("duplicate member {0} in family")]
    DuplicateMember(String),

    #[error("members {0} and {1} are not comparable under inclusion")]
    NotANest(String, String),

    #[error("operands live on different universes")]
    UniverseMismatch,

    #[error("relation is not reflexive at element {0}")]
    NotReflexive(usize),

    #[error("relation is not a linear order")]
    NotLinear,

    #[error("nests are not dual: {x} and {y} break the transpose identity")]
    NotDual { x: usize, y: usize },

    #[error("{0} is not a member of the nest")]
    NotAMember(String),

    #[error("bound exceeded: {size} > limit {limit}")]
    BoundExceeded { size: usize, limit: usize },

    #[error("map is not total: expected {expected} images with values below {codomain}")]
    NonTotalMap { expected: usize, codomain: usize },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid ray nest: {0}")]
    InvalidRayNest(String),

    #[error("point lies outside the carrier window")]
    OutsideWindow,

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("malformed instance: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
