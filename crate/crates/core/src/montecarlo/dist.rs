use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};

/// Lifetime distributions used as null and alternatives.
///
/// Gamma and Weibull are `(shape, scale)`; Pareto is `(scale, shape)` with
/// support `[scale, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DistributionSpec {
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Gamma { shape: f64, scale: f64 },
    Weibull { shape: f64, scale: f64 },
    Pareto { scale: f64, shape: f64 },
}

/// Parameter order used for the two-parameter families, recorded in reports.
pub const PARAMETERIZATION: &str =
    "gamma(shape, scale); weibull(shape, scale); pareto(scale, shape) on [scale, inf)";

/// Name of the exact gamma generator.
pub const GAMMA_ALGORITHM: &str = "Marsaglia-Tsang squeeze (rand_distr::Gamma)";

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

impl DistributionSpec {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Argument(format!(
                "uniform bounds need finite a < b, got ({a}, {b})"
            )));
        }
        Ok(DistributionSpec::Uniform { a, b })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        positive("exponential rate", rate)?;
        Ok(DistributionSpec::Exponential { rate })
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        positive("gamma shape", shape)?;
        positive("gamma scale", scale)?;
        Ok(DistributionSpec::Gamma { shape, scale })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        positive("weibull shape", shape)?;
        positive("weibull scale", scale)?;
        Ok(DistributionSpec::Weibull { shape, scale })
    }

    pub fn pareto(scale: f64, shape: f64) -> Result<Self> {
        positive("pareto scale", scale)?;
        positive("pareto shape", shape)?;
        Ok(DistributionSpec::Pareto { scale, shape })
    }

    /// Re-runs the constructor checks; deserialized values bypass them.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Uniform { a, b } => Self::uniform(a, b),
            DistributionSpec::Exponential { rate } => Self::exponential(rate),
            DistributionSpec::Gamma { shape, scale } => Self::gamma(shape, scale),
            DistributionSpec::Weibull { shape, scale } => Self::weibull(shape, scale),
            DistributionSpec::Pareto { scale, shape } => Self::pareto(scale, shape),
        }
        .map(|_| ())
    }

    /// `P(X > u)`.
    pub fn survival(&self, u: f64) -> f64 {
        match *self {
            DistributionSpec::Uniform { a, b } => ((b - u) / (b - a)).clamp(0.0, 1.0),
            DistributionSpec::Exponential { rate } => {
                if u <= 0.0 {
                    1.0
                } else {
                    (-rate * u).exp()
                }
            }
            DistributionSpec::Gamma { shape, scale } => {
                if u <= 0.0 {
                    1.0
                } else {
                    gamma_ur(shape, u / scale)
                }
            }
            DistributionSpec::Weibull { shape, scale } => {
                if u <= 0.0 {
                    1.0
                } else {
                    (-(u / scale).powf(shape)).exp()
                }
            }
            DistributionSpec::Pareto { scale, shape } => {
                if u <= scale {
                    1.0
                } else {
                    (scale / u).powf(shape)
                }
            }
        }
    }

    /// Lower end of the support.
    pub fn support_min(&self) -> f64 {
        match *self {
            DistributionSpec::Uniform { a, .. } => a,
            DistributionSpec::Pareto { scale, .. } => scale,
            _ => 0.0,
        }
    }

    /// One draw. Every family except gamma uses inversion of a single
    /// uniform `u ∈ [0, 1)`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DistributionSpec::Gamma { shape, scale } => Gamma::new(shape, scale)
                .expect("validated gamma parameters")
                .sample(rng),
            _ => self.invert(rng.random::<f64>()),
        }
    }

    /// Quantile function at `u` for the inversion families.
    fn invert(&self, u: f64) -> f64 {
        match *self {
            DistributionSpec::Uniform { a, b } => a + (b - a) * u,
            DistributionSpec::Exponential { rate } => -(-u).ln_1p() / rate,
            DistributionSpec::Weibull { shape, scale } => scale * (-(-u).ln_1p()).powf(1.0 / shape),
            DistributionSpec::Pareto { scale, shape } => scale * (1.0 - u).powf(-1.0 / shape),
            DistributionSpec::Gamma { .. } => unreachable!("gamma is not sampled by inversion"),
        }
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// `n` i.i.d. draws from `spec` as a [`crate::Sample`].
pub fn sample_dist<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    n: usize,
    rng: &mut R,
) -> Result<crate::Sample> {
    spec.validate()?;
    crate::Sample::new(spec.sample_n(n, rng))
}

fn fmt_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    write!(f, "{v}")
}

impl fmt::Display for DistributionSpec {
    /// Same syntax [`FromStr`] accepts, e.g. `uniform:0,1.2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, params): (&str, Vec<f64>) = match *self {
            DistributionSpec::Uniform { a, b } => ("uniform", vec![a, b]),
            DistributionSpec::Exponential { rate } => ("exp", vec![rate]),
            DistributionSpec::Gamma { shape, scale } => ("gamma", vec![shape, scale]),
            DistributionSpec::Weibull { shape, scale } => ("weibull", vec![shape, scale]),
            DistributionSpec::Pareto { scale, shape } => ("pareto", vec![scale, shape]),
        };
        write!(f, "{name}:")?;
        for (i, p) in params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            fmt_num(f, *p)?;
        }
        Ok(())
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses `family:p1[,p2]`, e.g. `uniform:0,1.2`, `exp:1`, `gamma:1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Argument(format!("distribution {s:?}: {why}"));
        let (family, rest) = s
            .split_once(':')
            .ok_or_else(|| bad("expected family:params"))?;
        let params = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| bad("parameters must be numbers"))
            })
            .collect::<Result<Vec<f64>>>()?;
        let want = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(bad(&format!(
                    "expected {k} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match family.trim().to_ascii_lowercase().as_str() {
            "uniform" | "u" => {
                want(2)?;
                Self::uniform(params[0], params[1])
            }
            "exp" | "exponential" => {
                want(1)?;
                Self::exponential(params[0])
            }
            "gamma" => {
                want(2)?;
                Self::gamma(params[0], params[1])
            }
            "weibull" => {
                want(2)?;
                Self::weibull(params[0], params[1])
            }
            "pareto" => {
                want(2)?;
                Self::pareto(params[0], params[1])
            }
            _ => Err(bad(
                "unknown family; expected uniform, exp, gamma, weibull or pareto",
            )),
        }
    }
}
