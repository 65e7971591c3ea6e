//! The fixed-point U-statistic test of uniformity for complete samples.
//!
//! `U(0,1)` is the only law on `[0,1]` with
//! `2E[X·I(X>t)] = P(X>t) + t(1-t)` for all `t`. Integrating the defect
//! against `dF` gives the departure measure
//! `Δ(F) = E[max(X₁,X₂) - 2X + X²]`, which vanishes under the null and is
//! estimated without bias by a degree-2 U-statistic. Under `H₀`,
//! `√n·Δ̂ → N(0, 1/45)`.

use crate::error::{Error, Result};
use crate::method::Method;
use crate::normal::{normal_quantile, two_sided_p};
use crate::result::TestResult;
use crate::sample::{compensated_sum, OrderedSample, Sample};

/// Null variance of `√n·Δ̂`.
pub const NULL_VARIANCE: f64 = 1.0 / 45.0;

/// Symmetric kernel `½(2max(x,y) - 2x - 2y + x² + y²)`.
#[inline]
pub fn kernel(x: f64, y: f64) -> f64 {
    0.5 * (2.0 * x.max(y) - 2.0 * x - 2.0 * y + x * x + y * y)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "significance level must lie in (0, 1), got {alpha}"
        )))
    }
}

fn check_pairs(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::SampleSize {
            required: 2,
            actual: n,
        });
    }
    Ok(())
}

/// `Δ̂` as the explicit pair average. O(n²); kept as the reference oracle.
pub fn delta_ustat(s: &Sample) -> Result<f64> {
    let x = s.values();
    let n = x.len();
    check_pairs(n)?;
    let total =
        compensated_sum((1..n).flat_map(|i| x[..i].iter().map(move |&xj| kernel(x[i], xj))));
    Ok(2.0 * total / (n as f64 * (n - 1) as f64))
}

/// `Δ̂` from the order statistics:
/// `(1/(n(n-1))) Σᵢ (2(i-n) + (n-1)X₍ᵢ₎)·X₍ᵢ₎` with 1-based ranks.
pub fn delta_orderstat(s: &OrderedSample) -> Result<f64> {
    let x = s.values();
    let n = x.len();
    check_pairs(n)?;
    let nf = n as f64;
    let total = compensated_sum(
        x.iter()
            .enumerate()
            .map(|(i, &xi)| (2.0 * ((i + 1) as f64 - nf) + (nf - 1.0) * xi) * xi),
    );
    Ok(total / (nf * (nf - 1.0)))
}

/// Two-sided asymptotic test: reject when `√(45n)·|Δ̂| > z_{α/2}`.
pub fn delta_test(s: &Sample, alpha: f64) -> Result<TestResult> {
    delta_test_ordered(&s.sorted(), alpha)
}

pub fn delta_test_ordered(s: &OrderedSample, alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let statistic = delta_orderstat(s)?;
    let n = s.len();
    let standardized = (n as f64 / NULL_VARIANCE).sqrt() * statistic;
    let critical_value = normal_quantile(alpha / 2.0)?;
    Ok(TestResult {
        method: Method::Delta,
        n,
        statistic,
        standardized,
        critical_value,
        lower_critical: None,
        p_value: two_sided_p(standardized),
        alpha,
        reject: standardized.abs() > critical_value,
    })
}
