use serde::{Deserialize, Serialize};

use crate::method::Method;

/// Outcome of one hypothesis test.
///
/// For the normal-calibrated tests (`delta`, `censored`) the rejection rule
/// is `|standardized| > critical_value`. For the simulation-calibrated
/// competitors `standardized` is the raw statistic and the test rejects when
/// it exceeds `critical_value`, or falls below `lower_critical` when a lower
/// tail is part of the region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub n: usize,
    pub statistic: f64,
    pub standardized: f64,
    pub critical_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_critical: Option<f64>,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
}

impl TestResult {
    /// Whether `reject` agrees with the rule implied by the other fields.
    pub fn is_consistent(&self) -> bool {
        let expected = match self.method {
            Method::Delta | Method::Censored => self.standardized.abs() > self.critical_value,
            _ => {
                self.standardized > self.critical_value
                    || self.lower_critical.is_some_and(|lo| self.standardized < lo)
            }
        };
        expected == self.reject && (0.0..=1.0).contains(&self.p_value)
    }
}
