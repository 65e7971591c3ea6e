use crate::delta::{check_alpha, kernel};
use crate::error::{Error, Result};
use crate::method::Method;
use crate::normal::{normal_quantile, two_sided_p};
use crate::result::TestResult;
use crate::sample::{compensated_sum, CensoredSample};

use super::km::{censoring_km, KaplanMeierCurve};

/// Which value of `K̂_c` divides an event's contribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// `K̂_c(Y-)`, the probability of still being uncensored at `Y`.
    #[default]
    LeftLimit,
    /// `K̂_c(Y)`. Differs from the left limit only when an event is tied
    /// with a censoring.
    RightContinuous,
}

/// How the censoring martingale residual enters `V_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceMode {
    /// `ŵ(Y_i)(1-δ_i) - Σ_j ŵ(Y_j)(1-δ_j)·I(Y_i ≥ Y_j) / #{k: Y_k ≥ Y_j}`:
    /// the observed-minus-compensated censoring count integrated against `ŵ`.
    #[default]
    Corrected,
    /// `ŵ(Y_i)(1-δ_i)·[1 - Σ_j I(Y_i > Y_j) / #{k: Y_k > Y_j}]`, with `ŵ`
    /// evaluated at the observation's own time throughout. Kept for
    /// side-by-side comparison only.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensoredOptions {
    pub weights: WeightMode,
    pub variance: VarianceMode,
}

/// Per-observation inverse-probability-of-censoring weights `δ_i / K̂_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct IpcwWeights {
    pub events: Vec<bool>,
    pub survival: Vec<f64>,
    /// `δ_i / K̂_c(·)`; zero for censored observations and `+∞` for an event
    /// with zero censoring survival.
    pub weights: Vec<f64>,
}

impl IpcwWeights {
    pub fn is_usable(&self, i: usize) -> bool {
        self.weights[i].is_finite()
    }

    fn check(&self, cs: &CensoredSample) -> Result<()> {
        match (0..self.weights.len()).find(|&i| !self.is_usable(i)) {
            Some(index) => Err(Error::DegenerateWeight {
                index,
                time: cs.observations()[index].time,
            }),
            None => Ok(()),
        }
    }
}

pub fn ipcw_weights(
    cs: &CensoredSample,
    curve: &KaplanMeierCurve,
    mode: WeightMode,
) -> IpcwWeights {
    let left = mode == WeightMode::LeftLimit;
    let mut events = Vec::with_capacity(cs.len());
    let mut survival = Vec::with_capacity(cs.len());
    let mut weights = Vec::with_capacity(cs.len());
    for o in cs.observations() {
        let k = curve.at(o.time, left);
        events.push(o.event);
        survival.push(k);
        weights.push(match (o.event, k > 0.0) {
            (false, _) => 0.0,
            (true, true) => 1.0 / k,
            (true, false) => f64::INFINITY,
        });
    }
    IpcwWeights {
        events,
        survival,
        weights,
    }
}

fn checked_weights(
    cs: &CensoredSample,
    curve: &KaplanMeierCurve,
    mode: WeightMode,
) -> Result<IpcwWeights> {
    let w = ipcw_weights(cs, curve, mode);
    w.check(cs)?;
    Ok(w)
}

fn pair_average(times: &[f64], w: &[f64]) -> f64 {
    let n = times.len();
    // Same loop order as `delta_ustat`, so uncensored data give identical bits.
    let total = compensated_sum(
        (1..n).flat_map(|i| (0..i).map(move |j| kernel(times[i], times[j]) * w[i] * w[j])),
    );
    2.0 * total / (n as f64 * (n - 1) as f64)
}

/// IPCW estimate `Δ̂_c` with left-limit weights.
pub fn delta_c(cs: &CensoredSample) -> Result<f64> {
    delta_c_with(cs, CensoredOptions::default())
}

pub fn delta_c_with(cs: &CensoredSample, opts: CensoredOptions) -> Result<f64> {
    let curve = censoring_km(cs);
    let w = checked_weights(cs, &curve, opts.weights)?;
    let times: Vec<f64> = cs.times().collect();
    Ok(pair_average(&times, &w.weights))
}

fn h1_with(t: f64, times: &[f64], w: &[f64]) -> f64 {
    compensated_sum(times.iter().zip(w).map(|(&y, &wi)| kernel(t, y) * wi)) / times.len() as f64
}

/// `ĥ₁(t) = (1/n) Σ_i h(t, Y_i)·δ_i / K̂_c(Y_i-)`.
pub fn h1_hat(t: f64, cs: &CensoredSample, curve: &KaplanMeierCurve) -> Result<f64> {
    let w = checked_weights(cs, curve, WeightMode::LeftLimit)?;
    let times: Vec<f64> = cs.times().collect();
    Ok(h1_with(t, &times, &w.weights))
}

/// `ŵ(t)`: average of `ĥ₁(Y_i)·δ_i / K̂_c(Y_i-)` over observations still
/// under follow-up after `t` (`Y_i > t`); zero past the last observation.
pub fn w_hat(t: f64, cs: &CensoredSample, curve: &KaplanMeierCurve) -> Result<f64> {
    let w = checked_weights(cs, curve, WeightMode::LeftLimit)?;
    let times: Vec<f64> = cs.times().collect();
    let (mut sum, mut count) = (Vec::new(), 0usize);
    for (i, &y) in times.iter().enumerate() {
        if y > t {
            count += 1;
            sum.push(h1_with(y, &times, &w.weights) * w.weights[i]);
        }
    }
    if count == 0 {
        return Ok(0.0);
    }
    Ok(compensated_sum(sum) / count as f64)
}

/// Empirical pieces of the null variance estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoredVarianceParts {
    /// `ĥ₁(Y_i)` per observation, input order.
    pub h1: Vec<f64>,
    /// `ŵ(Y_i)` per observation.
    pub w: Vec<f64>,
    pub v: Vec<f64>,
    pub v_bar: f64,
    /// `(4/(n-1)) Σ (V_i - V̄)²`.
    pub sigma2: f64,
}

pub fn variance_parts(cs: &CensoredSample, opts: CensoredOptions) -> Result<CensoredVarianceParts> {
    let curve = censoring_km(cs);
    let weights = checked_weights(cs, &curve, opts.weights)?;
    Ok(variance_parts_with(cs, &weights, opts.variance))
}

fn variance_parts_with(
    cs: &CensoredSample,
    weights: &IpcwWeights,
    mode: VarianceMode,
) -> CensoredVarianceParts {
    let times: Vec<f64> = cs.times().collect();
    let w = &weights.weights;
    let n = times.len();

    let h1: Vec<f64> = times.iter().map(|&t| h1_with(t, &times, w)).collect();

    // ŵ at every observed time from suffix sums over the time order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let sorted_times: Vec<f64> = order.iter().map(|&i| times[i]).collect();
    let mut suffix = vec![0.0; n + 1];
    for k in (0..n).rev() {
        let i = order[k];
        suffix[k] = suffix[k + 1] + h1[i] * w[i];
    }
    let w_at: Vec<f64> = times
        .iter()
        .map(|&t| {
            let first_after = sorted_times.partition_point(|&u| u <= t);
            let count = n - first_after;
            if count == 0 {
                0.0
            } else {
                suffix[first_after] / count as f64
            }
        })
        .collect();

    let residual: Vec<f64> = match mode {
        VarianceMode::Corrected => {
            // Compensator increments ŵ(Y_j)/#{Y_k >= Y_j} at censoring times,
            // accumulated in time order.
            let mut steps: Vec<(f64, f64)> = (0..n)
                .filter(|&j| !weights.events[j])
                .map(|j| {
                    let at_risk = n - sorted_times.partition_point(|&u| u < times[j]);
                    (times[j], w_at[j] / at_risk as f64)
                })
                .collect();
            steps.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut cumulative = Vec::with_capacity(steps.len() + 1);
            cumulative.push(0.0);
            for &(_, a) in &steps {
                cumulative.push(cumulative.last().unwrap() + a);
            }
            (0..n)
                .map(|i| {
                    let upto = steps.partition_point(|s| s.0 <= times[i]);
                    let observed = if weights.events[i] { 0.0 } else { w_at[i] };
                    observed - cumulative[upto]
                })
                .collect()
        }
        VarianceMode::Literal => (0..n)
            .map(|i| {
                if weights.events[i] {
                    return 0.0;
                }
                let comp: f64 = (0..n)
                    .filter(|&j| times[i] > times[j])
                    .map(|j| {
                        let beyond = n - sorted_times.partition_point(|&u| u <= times[j]);
                        1.0 / beyond as f64
                    })
                    .sum();
                w_at[i] * (1.0 - comp)
            })
            .collect(),
    };

    let v: Vec<f64> = (0..n).map(|i| h1[i] * w[i] + residual[i]).collect();
    let v_bar = compensated_sum(v.iter().copied()) / n as f64;
    let ss = compensated_sum(v.iter().map(|&vi| (vi - v_bar) * (vi - v_bar)));
    let sigma2 = 4.0 * ss / (n - 1) as f64;
    CensoredVarianceParts {
        h1,
        w: w_at,
        v,
        v_bar,
        sigma2,
    }
}

/// `σ̂²_c0`, the estimated null variance of `√n·Δ̂_c`.
pub fn sigma_c0_hat(cs: &CensoredSample) -> Result<f64> {
    Ok(variance_parts(cs, CensoredOptions::default())?.sigma2)
}

/// Reject when `√n·|Δ̂_c| / σ̂_c0 > z_{α/2}`.
pub fn censored_test(cs: &CensoredSample, alpha: f64) -> Result<TestResult> {
    censored_test_with(cs, alpha, CensoredOptions::default())
}

pub fn censored_test_with(
    cs: &CensoredSample,
    alpha: f64,
    opts: CensoredOptions,
) -> Result<TestResult> {
    check_alpha(alpha)?;
    let curve = censoring_km(cs);
    let weights = checked_weights(cs, &curve, opts.weights)?;
    let times: Vec<f64> = cs.times().collect();
    let statistic = pair_average(&times, &weights.weights);
    let parts = variance_parts_with(cs, &weights, opts.variance);
    if parts.sigma2.is_nan() || parts.sigma2 <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let n = cs.len();
    let standardized = (n as f64).sqrt() * statistic / parts.sigma2.sqrt();
    let critical_value = normal_quantile(alpha / 2.0)?;
    Ok(TestResult {
        method: Method::Censored,
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
