use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown poset name `{0}`")]
    UnknownPoset(String),

    #[error("poset has {size} elements, at most {max} are supported")]
    PosetTooLarge { size: usize, max: usize },

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid ground specification: {0}")]
    InvalidGround(String),

    #[error("set {set} lies outside the universe [{universe}]")]
    OutsideUniverse { set: String, universe: usize },

    #[error("duplicate set {0} in family")]
    DuplicateSet(String),

    #[error("family has {size} members, at most {max} are supported here")]
    FamilyTooLarge { size: usize, max: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("construction `{construction}` is invalid for these parameters: {reason}")]
    ValidityFloor {
        construction: &'static str,
        reason: String,
        collision: Option<(String, String)>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search cap exceeded: {0}")]
    CapExceeded(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
