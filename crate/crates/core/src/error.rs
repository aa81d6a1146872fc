use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("channel matrix is empty")]
    EmptyMatrix,
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} sums to {sum}, not 1")]
    NonStochasticRow { row: usize, sum: f64 },
    #[error("entry ({row}, {col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("parameter `{name}` = {value} is out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("Chernoff parameter s = {0} outside [0, 1]")]
    SOutOfRange(f64),
    #[error("alphabet of size {size} exceeds the limit {limit}")]
    AlphabetTooLarge { size: u128, limit: u128 },
    #[error("sequence lengths differ: {expected} vs {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {left} outputs feed {right} inputs")]
    DimensionMismatch { left: usize, right: usize },
    #[error("search space of {size} candidates exceeds the limit {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },
    #[error("M = {m} exceeds the supported maximum {max}")]
    MTooLarge { m: usize, max: usize },
    #[error("graph has {nodes} nodes; exhaustive search supports at most {max}")]
    GraphTooLarge { nodes: usize, max: usize },
    #[error("split resolution B = {b} is smaller than the number of paths {paths}")]
    BTooSmall { b: usize, paths: usize },
    #[error("state out of bounds: {0}")]
    BoundsViolation(String),
    #[error("block size must be even (got {0})")]
    OddBlockSize(usize),
    #[error("state space of {size} exceeds the limit {limit}")]
    StateSpaceTooLarge { size: u128, limit: u128 },
    #[error("horizon n = {n} is shorter than the minimum {min} for this schedule")]
    HorizonTooShort { n: usize, min: usize },
    #[error("exact block distributions are unavailable for this instance")]
    DistributionUnavailable,
    #[error("need at least {needed} usable data points, found {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("bound check failed: {0}")]
    InvariantViolation(String),
}
