use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid region {width} x {height}: both sides must be finite and > 0")]
    InvalidRegion { width: f64, height: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid fitness weights: {0}")]
    InvalidWeights(String),

    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),

    #[error("population of {0} is too small for selection (need at least 2)")]
    PopulationTooSmall(usize),

    #[error("parent deployments differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("search exhausted: no feasible deployment up to the ceiling of {ceiling} nodes")]
    SearchExhausted { ceiling: usize },

    #[error("test undefined: {0}")]
    UndefinedTest(String),

    #[error("empty input: {0}")]
    EmptyInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
