use thiserror::Error;

/// Errors raised by the uniformity tests, the simulation engine and the
/// file-format parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("observation {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("observation {index} has negative follow-up time {value}")]
    NegativeTime { index: usize, value: f64 },

    #[error("need at least {required} observations, got {actual}")]
    SampleSize { required: usize, actual: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("observation {index} = {value} lies outside [0, 1]; {method} requires data on the unit interval")]
    Domain {
        method: &'static str,
        index: usize,
        value: f64,
    },

    #[error("uncensored observation {index} (time {time}) has zero censoring survival; its IPCW weight is undefined")]
    DegenerateWeight { index: usize, time: f64 },

    #[error("estimated null standard deviation is zero; the standardized statistic is undefined")]
    ZeroVariance,

    #[error("data are constant ({value}); min-max standardization is undefined")]
    DegenerateData { value: f64 },

    #[error("method {method} is not available for {regime} data")]
    Unsupported {
        method: &'static str,
        regime: &'static str,
    },

    #[error("censoring target {target} is not attainable; achievable censoring rates lie in {low}..{high}")]
    Calibration { target: f64, low: f64, high: f64 },

    #[error("unknown table id {0:?}; expected T1..T8")]
    UnknownTable(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
