use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Every test the toolkit can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Fixed-point U-statistic test for complete data.
    Delta,
    /// Kolmogorov-Smirnov against F₀(x) = x.
    Ks,
    Frozini,
    Sherman,
    /// Quesenberry-Miller Q with a two-sided equal-tail rejection region.
    Q,
    /// Quesenberry-Miller Q rejecting only in the upper tail.
    QUpper,
    /// IPCW U-statistic test for right-censored data.
    Censored,
}

impl Method {
    pub const COMPETITORS: [Method; 4] = [Method::Ks, Method::Frozini, Method::Sherman, Method::Q];

    pub fn label(self) -> &'static str {
        match self {
            Method::Delta => "delta",
            Method::Ks => "ks",
            Method::Frozini => "frozini",
            Method::Sherman => "sherman",
            Method::Q => "q",
            Method::QUpper => "q-upper",
            Method::Censored => "censored",
        }
    }

    /// Competitor statistics are calibrated by simulation.
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            Method::Ks | Method::Frozini | Method::Sherman | Method::Q | Method::QUpper
        )
    }

    /// Spacing statistics are only defined for data on `[0, 1]`.
    pub fn requires_unit_interval(self) -> bool {
        matches!(self, Method::Sherman | Method::Q | Method::QUpper)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "delta" => Method::Delta,
            "ks" => Method::Ks,
            "frozini" | "f" => Method::Frozini,
            "sherman" | "s" => Method::Sherman,
            "q" => Method::Q,
            "q-upper" => Method::QUpper,
            "censored" => Method::Censored,
            _ => {
                return Err(Error::Argument(format!(
                    "unknown method {s:?}; expected delta, ks, frozini, sherman, q, q-upper or censored"
                )))
            }
        })
    }
}
