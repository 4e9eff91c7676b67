use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("population is empty")]
    EmptyPopulation,

    #[error("objective vector needs at least 2 components, got {0}")]
    TooFewObjectives(usize),

    #[error("non-finite value {value} at component {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid bounds for variable {index}: [{lo}, {hi}]")]
    InvalidBounds { index: usize, lo: f64, hi: f64 },

    #[error("variable {index} = {value} outside [{lo}, {hi}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("objective vector satisfies the goal; use plain Pareto dominance")]
    NoViolation,

    #[error("no priority levels assigned (z = 0); use plain two-stage ranking")]
    NoPriorityLevels,

    #[error("contradictory priority at objective {index}: pg = pf = {level}")]
    PriorityContradiction { index: usize, level: u32 },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid chromosome: {0}")]
    InvalidChromosome(String),

    #[error("evaluation failed at generation {generation}, individual {index}: {message}")]
    Evaluation {
        generation: usize,
        index: usize,
        message: String,
    },

    #[error("non-finite signal at sample {0}")]
    NonFiniteSignal(usize),

    #[error("point {index} lies beyond the reference point")]
    BeyondReference { index: usize },
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
