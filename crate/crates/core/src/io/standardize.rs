use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Requested rescaling onto the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum StandardizeSpec {
    #[default]
    None,
    /// `x ↦ (x - min)/(max - min)`.
    MinMax,
    /// `x ↦ (x - a)/(b - a)` for a known range.
    Range(f64, f64),
}

/// The rescaling actually applied, as recorded in reports.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Standardization {
    #[default]
    None,
    Range {
        a: f64,
        b: f64,
    },
    MinMax {
        min: f64,
        max: f64,
    },
}

impl StandardizeSpec {
    pub fn apply(self, values: &[f64]) -> Result<(Vec<f64>, Standardization)> {
        match self {
            StandardizeSpec::None => Ok((values.to_vec(), Standardization::None)),
            StandardizeSpec::Range(a, b) => {
                if !(a.is_finite() && b.is_finite() && b > a) {
                    return Err(Error::Argument(format!(
                        "standardization range needs finite a < b, got {a},{b}"
                    )));
                }
                let width = b - a;
                Ok((
                    values.iter().map(|&x| (x - a) / width).collect(),
                    Standardization::Range { a, b },
                ))
            }
            StandardizeSpec::MinMax => {
                let min = values.iter().copied().fold(f64::INFINITY, f64::min);
                let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if max <= min || max.is_nan() {
                    return Err(Error::DegenerateData { value: min });
                }
                let width = max - min;
                let scaled = values
                    .iter()
                    .map(|&x| if x == max { 1.0 } else { (x - min) / width })
                    .collect();
                Ok((scaled, Standardization::MinMax { min, max }))
            }
        }
    }
}

impl FromStr for StandardizeSpec {
    type Err = Error;

    /// `none`, `minmax` or `range:a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "none" => return Ok(StandardizeSpec::None),
            "minmax" => return Ok(StandardizeSpec::MinMax),
            _ => {}
        }
        let bad = || {
            Error::Argument(format!(
                "standardization {s:?}: expected none, minmax or range:a,b"
            ))
        };
        let rest = s.strip_prefix("range:").ok_or_else(bad)?;
        let (a, b) = rest.split_once(',').ok_or_else(bad)?;
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Argument(format!(
                "standardization range needs finite a < b, got {a},{b}"
            )));
        }
        Ok(StandardizeSpec::Range(a, b))
    }
}

impl fmt::Display for Standardization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Standardization::None => f.write_str("none"),
            Standardization::Range { a, b } => write!(f, "range({a},{b})"),
            Standardization::MinMax { min, max } => write!(f, "minmax({min},{max})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(
            "none".parse::<StandardizeSpec>().unwrap(),
            StandardizeSpec::None
        );
        assert_eq!(
            "minmax".parse::<StandardizeSpec>().unwrap(),
            StandardizeSpec::MinMax
        );
        assert_eq!(
            "range:0,23".parse::<StandardizeSpec>().unwrap(),
            StandardizeSpec::Range(0.0, 23.0)
        );
        for bad in [
            "range:1,1",
            "range:2,1",
            "range:0",
            "range:a,b",
            "zscore",
            "range:0,inf",
        ] {
            assert!(bad.parse::<StandardizeSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn minmax_maps_endpoints_exactly() {
        let (v, s) = StandardizeSpec::MinMax
            .apply(&[3.0, 0.1, 2.9, 0.7])
            .unwrap();
        assert_eq!(v[1], 0.0);
        assert_eq!(v[0], 1.0);
        assert_eq!(s, Standardization::MinMax { min: 0.1, max: 3.0 });
        assert_eq!(
            StandardizeSpec::MinMax.apply(&[2.0, 2.0]),
            Err(Error::DegenerateData { value: 2.0 })
        );
    }

    #[test]
    fn range_scales() {
        let (v, _) = StandardizeSpec::Range(0.0, 23.0)
            .apply(&[0.0, 11.5, 23.0])
            .unwrap();
        assert_eq!(v, vec![0.0, 0.5, 1.0]);
        assert!(StandardizeSpec::Range(1.0, 1.0).apply(&[1.0]).is_err());
    }
}
