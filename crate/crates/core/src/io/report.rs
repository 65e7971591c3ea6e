use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classical::Tail;
use crate::error::{Error, Result};
use crate::method::Method;
use crate::result::TestResult;

use super::standardize::Standardization;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Reject,
    Accept,
}

/// Everything needed to audit one test run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u32,
    pub tool_version: String,
    pub method: Method,
    pub n: usize,
    /// Uncensored observations, for censored runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<usize>,
    pub statistic: f64,
    pub standardized: f64,
    pub critical_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_critical: Option<f64>,
    pub p_value: f64,
    pub decision: Decision,
    pub alpha: f64,
    pub standardization: Standardization,
    /// Rejection-region shape and null replications for simulated
    /// critical values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Tail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(result: &TestResult, standardization: Standardization) -> Self {
        Report {
            format_version: REPORT_FORMAT_VERSION,
            tool_version: crate::VERSION.to_string(),
            method: result.method,
            n: result.n,
            events: None,
            statistic: result.statistic,
            standardized: result.standardized,
            critical_value: result.critical_value,
            lower_critical: result.lower_critical,
            p_value: result.p_value,
            decision: if result.reject {
                Decision::Reject
            } else {
                Decision::Accept
            },
            alpha: result.alpha,
            standardization,
            tail: None,
            reps: None,
            seed: None,
            warnings: Vec::new(),
        }
    }

    pub fn rejected(&self) -> bool {
        self.decision == Decision::Reject
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut row = |k: &str, v: String| {
            let _ = writeln!(out, "{k:<16} {v}");
        };
        row("method", self.method.to_string());
        row("n", self.n.to_string());
        if let Some(e) = self.events {
            row("events", e.to_string());
        }
        row("statistic", format!("{:.6}", self.statistic));
        row("standardized", format!("{:.6}", self.standardized));
        match self.lower_critical {
            Some(lo) => row(
                "critical values",
                format!("{lo:.6} / {:.6}", self.critical_value),
            ),
            None => row("critical value", format!("{:.6}", self.critical_value)),
        }
        row("p-value", format!("{:.6}", self.p_value));
        row("alpha", self.alpha.to_string());
        row(
            "decision",
            match self.decision {
                Decision::Reject => "reject H0 (not uniform on [0,1])".to_string(),
                Decision::Accept => "do not reject H0".to_string(),
            },
        );
        row("standardization", self.standardization.to_string());
        if let Some(t) = self.tail {
            row("region", t.to_string());
        }
        if let (Some(r), Some(s)) = (self.reps, self.seed) {
            row("null reps", format!("{r} (seed {s})"));
        }
        row("version", self.tool_version.clone());
        out
    }

    fn validate(&self) -> Result<()> {
        let bad = |message: String| Error::Parse { line: 1, message };
        if self.format_version != REPORT_FORMAT_VERSION {
            return Err(bad(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let numbers = [
            self.statistic,
            self.standardized,
            self.critical_value,
            self.p_value,
            self.alpha,
        ];
        if numbers
            .iter()
            .chain(self.lower_critical.iter())
            .any(|v| !v.is_finite())
        {
            return Err(bad("non-finite numeric field".into()));
        }
        if !(0.0..=1.0).contains(&self.p_value) || !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(bad("p_value or alpha out of range".into()));
        }
        let result = TestResult {
            method: self.method,
            n: self.n,
            statistic: self.statistic,
            standardized: self.standardized,
            critical_value: self.critical_value,
            lower_critical: self.lower_critical,
            p_value: self.p_value,
            alpha: self.alpha,
            reject: self.rejected(),
        };
        if !result.is_consistent() {
            return Err(bad(
                "decision disagrees with the statistic and critical value".into(),
            ));
        }
        Ok(())
    }
}

/// Parses and checks a JSON report.
pub fn parse_report(text: &str) -> Result<Report> {
    let report: Report = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    report.validate()?;
    Ok(report)
}
