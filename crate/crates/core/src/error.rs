use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("channel is not trace preserving (completeness deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("input ({a}, {b}) outside the alphabet of size {size}")]
    InputOutOfAlphabet { a: usize, b: usize, size: usize },

    #[error("measurement label {label} out of range for modulus {q}")]
    LabelOutOfRange { label: usize, q: usize },

    #[error("unsupported modulus q = {0} (only 2 and 3 are supported)")]
    UnsupportedModulus(usize),

    #[error("unsupported dimension d = {0}")]
    UnsupportedDimension(usize),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("map is not column stochastic: {0}")]
    NotStochastic(String),

    #[error("strategy is not in lift normal form: {0}")]
    NotNormalForm(String),

    #[error("value {value} outside allowed range {range}")]
    OutOfRange { value: f64, range: &'static str },

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
