use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arrangement must have exactly 5 cards, got {0}")]
    WrongLength(usize),
    #[error("invalid card character {0:?}, expected 'B' or 'r'")]
    InvalidCard(char),
    #[error("arrangement {0:?} must contain exactly 3 black and 2 red cards")]
    WrongMultiset(String),
    #[error("bit must be 0 or 1, got {0}")]
    InvalidBit(u64),
    #[error("cut index {0} out of range 0..=4")]
    CutIndexOutOfRange(u64),
    #[error("epsilon {0} outside [-0.8, 0.2]")]
    EpsilonOutOfRange(f64),
    #[error("lower bound on epsilon {0} outside (0, 0.2]")]
    EpsilonLowerBoundOutOfRange(f64),
    #[error("diagonal probability a = {0} outside [0, 1]")]
    DiagonalOutOfRange(f64),
    #[error("confidentiality level C = {0} outside (0, 0.5)")]
    LevelOutOfRange(f64),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("prior has empty support")]
    EmptyPrior,
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    #[error("arrangement {0} is not in the restricted initial set")]
    NotRestrictedInitial(String),
    #[error("number of cuts {requested} exceeds the cap of {cap}")]
    TooManyCuts { requested: u64, cap: u64 },
    #[error("number of samples must be at least 1")]
    NoSamples,
    #[error("no finite number of shuffles reaches the requested level")]
    Unreachable,
    #[error("engine {engine:?} does not support this scenario: {reason}")]
    Unsupported { engine: String, reason: String },
    #[error("unknown engine {0:?}")]
    UnknownEngine(String),
    #[error("invalid range {0:?}")]
    InvalidRange(String),
    #[error("posterior tables have different structure at final {0}")]
    TableMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
