use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// `|v|` is at or below the speed threshold; the arc-length
    /// parameterization of the flux curve breaks down.
    #[error("degenerate speed: |v| = {speed:e} <= {threshold:e}")]
    DegenerateSpeed { speed: f64, threshold: f64 },

    /// `|ω|` is at or below the rotation threshold; the curve is locally a
    /// straight line and has no normal or binormal direction.
    #[error("degenerate rotation: |omega| = {omega:e} <= {threshold:e}")]
    DegenerateRotation { omega: f64, threshold: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("wrong channel count: expected {expected}, got {got}")]
    WrongChannelCount { expected: usize, got: usize },

    #[error("signal too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("degenerate envelope at sample {index}: u^2 + uh^2 = {value:e}")]
    DegenerateEnvelope { index: usize, value: f64 },

    #[error("malformed csv: {0}")]
    MalformedCsv(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
