use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed label sequence at index {index}: {reason}")]
    MalformedSequence { index: usize, reason: String },
    #[error("bad arrival schedule: {0}")]
    BadSchedule(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("schedule forces vertex {vertex} at end {end} but only {available} labels exist")]
    ScheduleExhausted { end: u64, vertex: usize, available: usize },
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("enumeration cap exceeded: n = {n} > cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("empty sample")]
    EmptySample,
    #[error("degenerate support: {0}")]
    DegenerateSupport(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("zero partial sum at index {0}")]
    ZeroSum(usize),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("insufficient tail: {observed} observations at or above d_min = {d_min}, need {required}")]
    InsufficientTail { observed: usize, d_min: u64, required: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn bad_params(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}
