use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate speed pair: c = {0} (the two speeds must differ)")]
    DegenerateSpeed(f64),

    #[error("invalid speed: c = {0} (must be positive and finite)")]
    InvalidSpeed(f64),

    #[error("speed range [{lo}, {hi}] contains the degenerate speed c = 1")]
    RangeContainsDegenerate { lo: f64, hi: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("cannot parse phase index `{0}` (expected e.g. \"c11+--\")")]
    BadPhaseIndex(String),

    #[error("resonance report is not separated (min gap {min_gap:e} <= tau {tau:e})")]
    NotSeparated { min_gap: f64, tau: f64 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("grid size {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("step rejected at t = {t}: linear energy jumped by {jump:.3} (relative)")]
    StepRejected { t: f64, jump: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
