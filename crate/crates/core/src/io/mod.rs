//! File formats: input datasets, test reports and the critical-value cache.

mod cv_cache;
mod dataset;
mod report;
mod standardize;

pub use cv_cache::{parse_cache, render_cache, CriticalValueCache, CACHE_ENV, CACHE_FILE};
pub use dataset::{parse_dataset, read_dataset, Dataset};
pub use report::{parse_report, Decision, Report, REPORT_FORMAT_VERSION};
pub use standardize::{Standardization, StandardizeSpec};
