//! Classical competitors: Kolmogorov-Smirnov, Frozini, Sherman and the
//! Quesenberry-Miller Q statistic, with critical values and p-values taken
//! from a simulated null distribution.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delta::check_alpha;
use crate::error::{Error, Result};
use crate::method::Method;
use crate::result::TestResult;
use crate::rng::{tag, StreamFamily};
use crate::sample::{compensated_sum, OrderedSample, Sample};

fn check_nonempty(s: &OrderedSample) -> Result<()> {
    if s.is_empty() {
        return Err(Error::SampleSize {
            required: 1,
            actual: 0,
        });
    }
    Ok(())
}

fn check_unit(s: &OrderedSample, method: &'static str) -> Result<()> {
    match s.first_outside_unit() {
        Some((index, value)) => Err(Error::Domain {
            method,
            index,
            value,
        }),
        None => Ok(()),
    }
}

/// `max(D⁺, D⁻)` against `F₀(x) = x` truncated to `[0, 1]`.
pub fn ks_stat(s: &OrderedSample) -> Result<f64> {
    check_nonempty(s)?;
    let n = s.len() as f64;
    let (mut d_plus, mut d_minus) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (j, &x) in s.values().iter().enumerate() {
        let f0 = x.clamp(0.0, 1.0);
        d_plus = d_plus.max((j + 1) as f64 / n - f0);
        d_minus = d_minus.max(f0 - j as f64 / n);
    }
    Ok(d_plus.max(d_minus))
}

/// `(1/√n) Σ |X₍ⱼ₎ - (j - ½)/n|`.
pub fn frozini_stat(s: &OrderedSample) -> Result<f64> {
    check_nonempty(s)?;
    let n = s.len() as f64;
    let total = compensated_sum(
        s.values()
            .iter()
            .enumerate()
            .map(|(j, &x)| (x - (j as f64 + 0.5) / n).abs()),
    );
    Ok(total / n.sqrt())
}

/// Spacings `X₍ⱼ₎ - X₍ⱼ₋₁₎`, j = 1..=n+1, with `X₍₀₎ = 0` and `X₍ₙ₊₁₎ = 1`.
fn spacings(s: &OrderedSample) -> Vec<f64> {
    let x = s.values();
    let mut out = Vec::with_capacity(x.len() + 1);
    let mut prev = 0.0;
    for &v in x.iter().chain(std::iter::once(&1.0)) {
        out.push(v - prev);
        prev = v;
    }
    out
}

/// `½ Σ_{j=1}^{n+1} |D_j - 1/(n+1)|` over the spacings `D_j`.
pub fn sherman_stat(s: &OrderedSample) -> Result<f64> {
    check_nonempty(s)?;
    check_unit(s, "sherman")?;
    let d = spacings(s);
    let expected = 1.0 / d.len() as f64;
    Ok(0.5 * compensated_sum(d.iter().map(|&dj| (dj - expected).abs())))
}

/// `Σ_{j=1}^{n+1} D_j² + Σ_{j=1}^{n} D_j·D_{j+1}`.
pub fn q_stat(s: &OrderedSample) -> Result<f64> {
    check_nonempty(s)?;
    check_unit(s, "q")?;
    let d = spacings(s);
    let squares = d.iter().map(|&dj| dj * dj);
    let cross = d.windows(2).map(|w| w[0] * w[1]);
    Ok(compensated_sum(squares.chain(cross)))
}

/// Evaluates a competitor statistic.
pub fn statistic(method: Method, s: &OrderedSample) -> Result<f64> {
    match method {
        Method::Ks => ks_stat(s),
        Method::Frozini => frozini_stat(s),
        Method::Sherman => sherman_stat(s),
        Method::Q | Method::QUpper => q_stat(s),
        Method::Delta | Method::Censored => Err(Error::Argument(format!(
            "{method} is not a simulation-calibrated competitor"
        ))),
    }
}

/// Shape of the rejection region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    Upper,
    /// Equal-tail: α/2 in each tail.
    TwoSided,
}

impl Tail {
    pub fn of(method: Method) -> Tail {
        match method {
            Method::Q => Tail::TwoSided,
            _ => Tail::Upper,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Tail::Upper => "upper",
            Tail::TwoSided => "two-sided",
        }
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Tail {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(Tail::Upper),
            "two-sided" => Ok(Tail::TwoSided),
            _ => Err(Error::Argument(format!("unknown tail {s:?}"))),
        }
    }
}

/// Sorted draws of a competitor statistic under `n` i.i.d. `U(0,1)`
/// observations.
#[derive(Debug, Clone)]
pub struct NullDistribution {
    pub method: Method,
    pub n: usize,
    pub seed: u64,
    values: Vec<f64>,
}

impl NullDistribution {
    /// Runs `reps` null replications in parallel. The result does not depend
    /// on the number of worker threads.
    pub fn simulate(method: Method, n: usize, reps: usize, seed: u64) -> Result<Self> {
        if !method.is_classical() {
            return Err(Error::Argument(format!(
                "no simulated null distribution for method {method}"
            )));
        }
        if n == 0 || reps == 0 {
            return Err(Error::Argument(
                "null simulation needs n >= 1 and reps >= 1".into(),
            ));
        }
        // Q and q-upper share the same statistic and hence the same stream.
        let stat_tag = match method {
            Method::QUpper => Method::Q,
            m => m,
        };
        let family = StreamFamily::new(seed, &[tag("null"), tag(stat_tag.label()), n as u64]);
        let mut values = (0..reps as u64)
            .into_par_iter()
            .map(|rep| {
                let mut rng = family.stream(rep);
                let draws: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                statistic(method, &OrderedSample::from_unsorted_finite(draws))
            })
            .collect::<Result<Vec<f64>>>()?;
        values.sort_by(f64::total_cmp);
        Ok(NullDistribution {
            method,
            n,
            seed,
            values,
        })
    }

    pub fn reps(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Empirical `q`-quantile (inverse of the empirical CDF).
    pub fn quantile(&self, q: f64) -> f64 {
        let r = self.values.len();
        let k = ((q * r as f64).ceil() as usize).clamp(1, r);
        self.values[k - 1]
    }

    /// `(lower, upper)` critical values for level `alpha`.
    pub fn critical_values(&self, alpha: f64, tail: Tail) -> (Option<f64>, f64) {
        match tail {
            Tail::Upper => (None, self.quantile(1.0 - alpha)),
            Tail::TwoSided => (
                Some(self.quantile(alpha / 2.0)),
                self.quantile(1.0 - alpha / 2.0),
            ),
        }
    }

    /// Monte Carlo p-value with the usual `+1` correction.
    pub fn p_value(&self, stat: f64, tail: Tail) -> f64 {
        let r = self.values.len() as f64;
        let at_least = (self.values.len() - self.values.partition_point(|&v| v < stat)) as f64;
        let upper = (1.0 + at_least) / (r + 1.0);
        match tail {
            Tail::Upper => upper,
            Tail::TwoSided => {
                let at_most = self.values.partition_point(|&v| v <= stat) as f64;
                let lower = (1.0 + at_most) / (r + 1.0);
                (2.0 * upper.min(lower)).min(1.0)
            }
        }
    }
}

/// A simulated critical value, keyed by everything that determines it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueTable {
    pub method: Method,
    pub n: usize,
    pub alpha: f64,
    pub reps: usize,
    pub seed: u64,
    pub tail: Tail,
    /// Lower critical value; present only for two-sided regions.
    pub lower: Option<f64>,
    /// Upper critical value.
    pub value: f64,
}

impl CriticalValueTable {
    pub fn rejects(&self, stat: f64) -> bool {
        stat > self.value || self.lower.is_some_and(|lo| stat < lo)
    }
}

/// Simulated `(1 - α)` critical value (equal-tail pair for two-sided Q).
pub fn mc_critical_value(
    method: Method,
    n: usize,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<CriticalValueTable> {
    check_alpha(alpha)?;
    let null = NullDistribution::simulate(method, n, reps, seed)?;
    Ok(critical_value_from(&null, alpha))
}

pub fn critical_value_from(null: &NullDistribution, alpha: f64) -> CriticalValueTable {
    let tail = Tail::of(null.method);
    let (lower, value) = null.critical_values(alpha, tail);
    CriticalValueTable {
        method: null.method,
        n: null.n,
        alpha,
        reps: null.reps(),
        seed: null.seed,
        tail,
        lower,
        value,
    }
}

/// Runs a competitor test against a simulated null distribution.
pub fn classical_test(s: &Sample, alpha: f64, null: &NullDistribution) -> Result<TestResult> {
    check_alpha(alpha)?;
    let ordered = s.sorted();
    if ordered.len() != null.n {
        return Err(Error::Argument(format!(
            "null distribution simulated for n = {}, sample has n = {}",
            null.n,
            ordered.len()
        )));
    }
    let stat = statistic(null.method, &ordered)?;
    let cv = critical_value_from(null, alpha);
    Ok(TestResult {
        method: null.method,
        n: ordered.len(),
        statistic: stat,
        standardized: stat,
        critical_value: cv.value,
        lower_critical: cv.lower,
        p_value: null.p_value(stat, cv.tail),
        alpha,
        reject: cv.rejects(stat),
    })
}
