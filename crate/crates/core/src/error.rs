use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable sets overlap on `{0}`")]
    OverlappingVariables(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("joint alphabet has {cells} cells, more than the cap of {cap}")]
    AlphabetTooLarge { cells: usize, cap: usize },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("unknown example channel `{0}`")]
    UnknownExample(String),

    /// A bound was requested for a channel that does not satisfy its hypotheses.
    #[error("bound not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid of {points} points exceeds the limit of {limit}; use a coarser step")]
    GridTooLarge { points: u128, limit: u128 },

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("region is empty")]
    EmptyRegion,

    #[error("region is unbounded along a requested direction")]
    Unbounded,

    #[error("direction sets differ")]
    DirectionMismatch,

    #[error("unknown suite `{name}`; valid suites: {valid}")]
    UnknownSuite { name: String, valid: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
