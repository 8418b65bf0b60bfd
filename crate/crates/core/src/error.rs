use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("component {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("integer component {index} = {value} is not integral")]
    NonIntegral { index: usize, value: f64 },

    #[error("objective returned non-finite value {value} at {x:?}")]
    NonFinite { value: f64, x: Vec<f64> },

    #[error("objective failed at {x:?}: {message}")]
    Objective { x: Vec<f64>, message: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("{algorithm} needs a population of at least {required}, got {actual}")]
    PopulationTooSmall {
        algorithm: &'static str,
        required: usize,
        actual: usize,
    },

    #[error("population is empty")]
    EmptyPopulation,

    #[error("topology: {0}")]
    Topology(String),

    #[error("problem mismatch: {0}")]
    ProblemMismatch(String),

    #[error("archipelago is evolving")]
    Evolving,

    #[error("archipelago has no islands")]
    NoIslands,

    #[error("an island thread panicked: {0}")]
    IslandPanicked(String),

    #[error("archive is empty")]
    EmptyArchive,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
