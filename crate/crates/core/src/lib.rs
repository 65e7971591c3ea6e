//! Goodness-of-fit tests for the standard uniform distribution.
//!
//! * [`delta`]: the fixed-point U-statistic test for complete samples.
//! * [`censored`]: its IPCW extension to right-censored samples.
//! * [`classical`]: Kolmogorov-Smirnov, Frozini, Sherman and
//!   Quesenberry-Miller competitors with simulated critical values.
//! * [`montecarlo`]: size and power studies, censoring calibration and the
//!   reference tables.
//! * [`io`]: the dataset, report and cache file formats.

pub mod censored;
pub mod classical;
pub mod delta;
pub mod error;
pub mod io;
pub mod method;
pub mod montecarlo;
pub mod normal;
pub mod result;
pub mod rng;
pub mod sample;

pub use error::{Error, Result};
pub use method::Method;
pub use result::TestResult;
pub use sample::{CensoredObservation, CensoredSample, OrderedSample, Sample};

/// Crate version, recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
