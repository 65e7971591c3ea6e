use crate::sample::{CensoredObservation, CensoredSample};

/// Product-limit estimate of the censoring survival function `K_c`.
///
/// Censorings are the events. At a time shared by a failure and a
/// censoring the failure is ordered first, so it is still at risk for the
/// censoring.
#[derive(Debug, Clone, PartialEq)]
pub struct KaplanMeierCurve {
    jump_times: Vec<f64>,
    survival_values: Vec<f64>,
    n: usize,
}

impl KaplanMeierCurve {
    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    /// Survival just after each jump.
    pub fn survival_values(&self) -> &[f64] {
        &self.survival_values
    }

    pub fn n_at_construction(&self) -> usize {
        self.n
    }

    /// `K̂_c(t)`, or the left limit `K̂_c(t-)` when `left_limit` is set.
    pub fn at(&self, t: f64, left_limit: bool) -> f64 {
        let k = if left_limit {
            self.jump_times.partition_point(|&u| u < t)
        } else {
            self.jump_times.partition_point(|&u| u <= t)
        };
        if k == 0 {
            1.0
        } else {
            self.survival_values[k - 1]
        }
    }
}

pub fn censoring_km(cs: &CensoredSample) -> KaplanMeierCurve {
    KaplanMeierCurve::from_observations(cs.observations())
}

impl KaplanMeierCurve {
    /// Builds the curve from raw observations, without the two-event
    /// requirement of [`CensoredSample`].
    pub fn from_observations(observations: &[CensoredObservation]) -> KaplanMeierCurve {
        build(observations)
    }
}

fn build(observations: &[CensoredObservation]) -> KaplanMeierCurve {
    let mut obs: Vec<(f64, bool)> = observations.iter().map(|o| (o.time, o.event)).collect();
    obs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = obs.len();

    let mut jump_times = Vec::new();
    let mut survival_values = Vec::new();
    let mut surv = 1.0_f64;
    let mut i = 0;
    while i < n {
        let t = obs[i].0;
        let at_risk = n - i;
        let mut censored = 0usize;
        let mut j = i;
        while j < n && obs[j].0 == t {
            censored += usize::from(!obs[j].1);
            j += 1;
        }
        if censored > 0 {
            surv *= 1.0 - censored as f64 / at_risk as f64;
            jump_times.push(t);
            survival_values.push(surv);
        }
        i = j;
    }
    KaplanMeierCurve {
        jump_times,
        survival_values,
        n,
    }
}

pub fn km_at(curve: &KaplanMeierCurve, t: f64, left_limit: bool) -> f64 {
    curve.at(t, left_limit)
}
