use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("radius {0} outside the admissible range [0, 1)")]
    Domain(f64),

    #[error("invalid weight spec `{0}` (expected w<level>:<alpha>:<c> with alpha, c > 0)")]
    InvalidWeight(String),

    #[error("invalid word `{0}` (expected a non-empty string over M, S, T)")]
    InvalidWord(String),

    #[error("invalid series `{0}`")]
    InvalidSeries(String),

    #[error("word of length {0} exceeds the decomposition limit of 8 letters")]
    WordTooLong(usize),

    #[error("decomposition system for word {0} is rank deficient")]
    SingularSystem(String),

    #[error("coefficient {index} of word {word} is not an integer ({value})")]
    NonIntegerCoefficient {
        word: String,
        index: usize,
        value: f64,
    },

    #[error("kernel tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailTooLarge { bound: f64, tol: f64 },

    #[error("moment table too short: need {needed} moments, have {have}")]
    TableTooShort { needed: usize, have: usize },

    #[error("quadrature did not converge: {0}")]
    NotConverged(String),

    #[error("moments are not strictly decreasing at index {0}")]
    MomentsNotMonotone(usize),

    #[error("points coincide; quotient undefined")]
    DegeneratePair,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
