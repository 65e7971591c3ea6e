use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::censored::censored_test;
use crate::classical::{statistic, CriticalValueTable};
use crate::delta::{check_alpha, delta_orderstat, NULL_VARIANCE};
use crate::error::{Error, Result};
use crate::io::CriticalValueCache;
use crate::method::Method;
use crate::normal::normal_quantile;
use crate::rng::{tag, StreamFamily};
use crate::sample::{CensoredObservation, CensoredSample, OrderedSample};

use super::calibrate::calibrate_censoring;
use super::dist::DistributionSpec;

/// Null replications behind each simulated competitor critical value.
pub const CALIBRATION_REPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub dist: DistributionSpec,
    pub n: usize,
    pub alpha: f64,
    pub reps: usize,
    pub seed: u64,
    /// Target censoring fraction `P(X > C)`, when censored.
    pub censoring: Option<f64>,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.dist.validate()?;
        check_alpha(self.alpha)?;
        if self.reps == 0 {
            return Err(Error::Argument("reps must be at least 1".into()));
        }
        if let Some(t) = self.censoring {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Argument(format!(
                    "censoring target must lie in (0, 1), got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Rejection count for one `(distribution, n, level, method)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub method: Method,
    pub dist: DistributionSpec,
    pub n: usize,
    pub alpha: f64,
    pub censoring: Option<f64>,
    /// Calibrated bound `c` of `C ~ U(0, c)`.
    pub censoring_bound: Option<f64>,
    /// Observed fraction of censored lifetimes over all replications.
    pub censored_fraction: Option<f64>,
    pub rejections: u64,
    /// Replications where the test could not be evaluated (fewer than two
    /// events, degenerate weight or zero variance); counted as acceptances.
    pub failures: u64,
    pub reps: usize,
    pub seed: u64,
    pub rate: f64,
}

enum Outcome {
    /// Two-sided normal statistic `|z|`.
    AbsZ(f64),
    /// Raw competitor statistic.
    Stat(f64),
    /// Data outside `[0, 1]` for a spacing statistic: impossible under the
    /// null, so the test rejects at every level.
    OffSupport,
    Failure,
}

enum Rule {
    Normal(f64),
    Simulated(CriticalValueTable),
}

impl Rule {
    fn rejects(&self, o: &Outcome) -> bool {
        match (self, o) {
            (Rule::Normal(z), Outcome::AbsZ(a)) => a > z,
            (Rule::Simulated(cv), Outcome::Stat(s)) => cv.rejects(*s),
            (_, Outcome::OffSupport) => true,
            _ => false,
        }
    }
}

/// Runs studies, holding the critical-value cache for the competitors.
pub struct Simulator {
    cache: CriticalValueCache,
    calibration_reps: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator::new(CriticalValueCache::in_memory())
    }
}

impl Simulator {
    pub fn new(cache: CriticalValueCache) -> Self {
        Simulator {
            cache,
            calibration_reps: CALIBRATION_REPS,
        }
    }

    pub fn with_calibration_reps(mut self, reps: usize) -> Self {
        self.calibration_reps = reps;
        self
    }

    pub fn calibration_reps(&self) -> usize {
        self.calibration_reps
    }

    pub fn cache(&self) -> &CriticalValueCache {
        &self.cache
    }

    /// Rejection counts of `method` at each level in `alphas`, all from the
    /// same replications.
    #[allow(clippy::too_many_arguments)]
    pub fn rejection_counts(
        &self,
        dist: &DistributionSpec,
        n: usize,
        reps: usize,
        seed: u64,
        censoring: Option<f64>,
        method: Method,
        alphas: &[f64],
    ) -> Result<Vec<PowerRow>> {
        for &alpha in alphas {
            SimulationConfig {
                dist: *dist,
                n,
                alpha,
                reps,
                seed,
                censoring,
            }
            .validate()?;
        }
        match (censoring.is_some(), method) {
            (true, Method::Censored) | (false, Method::Delta) => {}
            (false, m) if m.is_classical() => {}
            (true, m) => {
                return Err(Error::Unsupported {
                    method: m.label(),
                    regime: "censored",
                })
            }
            (false, m) => {
                return Err(Error::Unsupported {
                    method: m.label(),
                    regime: "complete",
                })
            }
        }
        let min_n = if method.is_classical() { 1 } else { 2 };
        if n < min_n {
            return Err(Error::SampleSize {
                required: min_n,
                actual: n,
            });
        }

        let rules = alphas
            .iter()
            .map(|&alpha| {
                Ok(if method.is_classical() {
                    Rule::Simulated(self.cache.get(
                        method,
                        n,
                        alpha,
                        self.calibration_reps,
                        seed,
                    )?)
                } else {
                    Rule::Normal(normal_quantile(alpha / 2.0)?)
                })
            })
            .collect::<Result<Vec<Rule>>>()?;

        let bound = censoring
            .map(|target| calibrate_censoring(dist, target))
            .transpose()?;
        let regime = censoring.map_or(0, f64::to_bits);
        let family = StreamFamily::new(seed, &[tag("replicate"), n as u64, regime]);

        let outcomes: Vec<(Outcome, usize)> = (0..reps as u64)
            .into_par_iter()
            .map(|rep| {
                let mut rng = family.stream(rep);
                let lifetimes = dist.sample_n(n, &mut rng);
                match bound {
                    None => Ok((complete_outcome(method, lifetimes)?, 0)),
                    Some(c) => {
                        let obs: Vec<CensoredObservation> = lifetimes
                            .iter()
                            .map(|&x| {
                                let cens = c * rng.random::<f64>();
                                CensoredObservation::new(x.min(cens), x <= cens)
                            })
                            .collect();
                        let censored = obs.iter().filter(|o| !o.event).count();
                        Ok((censored_outcome(obs), censored))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;

        let failures = outcomes
            .iter()
            .filter(|(o, _)| matches!(o, Outcome::Failure))
            .count() as u64;
        let censored_fraction =
            bound.map(|_| outcomes.iter().map(|(_, c)| *c as f64).sum::<f64>() / (reps * n) as f64);

        Ok(alphas
            .iter()
            .zip(&rules)
            .map(|(&alpha, rule)| {
                let rejections = outcomes.iter().filter(|(o, _)| rule.rejects(o)).count() as u64;
                PowerRow {
                    method,
                    dist: *dist,
                    n,
                    alpha,
                    censoring,
                    censoring_bound: bound,
                    censored_fraction,
                    rejections,
                    failures,
                    reps,
                    seed,
                    rate: rejections as f64 / reps as f64,
                }
            })
            .collect())
    }

    pub fn rejection_rate(&self, config: &SimulationConfig, method: Method) -> Result<PowerRow> {
        let mut rows = self.rejection_counts(
            &config.dist,
            config.n,
            config.reps,
            config.seed,
            config.censoring,
            method,
            &[config.alpha],
        )?;
        Ok(rows.remove(0))
    }
}

fn complete_outcome(method: Method, lifetimes: Vec<f64>) -> Result<Outcome> {
    let ordered = OrderedSample::from_unsorted_finite(lifetimes);
    match method {
        Method::Delta => {
            let d = delta_orderstat(&ordered)?;
            Ok(Outcome::AbsZ(
                ((ordered.len() as f64 / NULL_VARIANCE).sqrt() * d).abs(),
            ))
        }
        m => match statistic(m, &ordered) {
            Ok(s) => Ok(Outcome::Stat(s)),
            Err(Error::Domain { .. }) => Ok(Outcome::OffSupport),
            Err(e) => Err(e),
        },
    }
}

fn censored_outcome(obs: Vec<CensoredObservation>) -> Outcome {
    let Ok(cs) = CensoredSample::new(obs) else {
        return Outcome::Failure;
    };
    // alpha only affects the decision, which is re-derived per level
    match censored_test(&cs, 0.5) {
        Ok(r) => Outcome::AbsZ(r.standardized.abs()),
        Err(_) => Outcome::Failure,
    }
}

/// One cell with a fresh in-memory critical-value cache.
pub fn rejection_rate(config: &SimulationConfig, method: Method) -> Result<PowerRow> {
    Simulator::default().rejection_rate(config, method)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(
        dist: &str,
        n: usize,
        alpha: f64,
        reps: usize,
        censoring: Option<f64>,
    ) -> SimulationConfig {
        SimulationConfig {
            dist: dist.parse().unwrap(),
            n,
            alpha,
            reps,
            seed: 17,
            censoring,
        }
    }

    #[test]
    fn unsupported_combinations() {
        let sim = Simulator::default();
        let c = cfg("uniform:0,1", 20, 0.05, 10, Some(0.2));
        for m in [Method::Ks, Method::Delta, Method::Q] {
            assert!(matches!(
                sim.rejection_rate(&c, m),
                Err(Error::Unsupported { .. })
            ));
        }
        let c = cfg("uniform:0,1", 20, 0.05, 10, None);
        assert!(matches!(
            sim.rejection_rate(&c, Method::Censored),
            Err(Error::Unsupported { .. })
        ));
        assert!(sim
            .rejection_rate(&cfg("uniform:0,1", 20, 1.5, 10, None), Method::Delta)
            .is_err());
        assert!(sim
            .rejection_rate(&cfg("uniform:0,1", 20, 0.05, 0, None), Method::Delta)
            .is_err());
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let c = cfg("uniform:0,1.2", 30, 0.05, 2_000, Some(0.3));
        let a = rejection_rate(&c, Method::Censored).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool
            .install(|| rejection_rate(&c, Method::Censored))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn levels_are_nested() {
        let sim = Simulator::new(CriticalValueCache::in_memory()).with_calibration_reps(20_000);
        let d: DistributionSpec = "uniform:0,1.2".parse().unwrap();
        for m in [
            Method::Delta,
            Method::Ks,
            Method::Frozini,
            Method::Sherman,
            Method::Q,
        ] {
            let rows = sim
                .rejection_counts(&d, 25, 3_000, 5, None, m, &[0.01, 0.05])
                .unwrap();
            assert!(rows[0].rejections <= rows[1].rejections, "{m}");
        }
        let rows = sim
            .rejection_counts(&d, 50, 1_000, 5, Some(0.2), Method::Censored, &[0.01, 0.05])
            .unwrap();
        assert!(rows[0].rejections <= rows[1].rejections);
    }

    #[test]
    fn off_support_counts_as_rejection_for_spacings() {
        let sim = Simulator::new(CriticalValueCache::in_memory()).with_calibration_reps(5_000);
        // every exponential(1) sample of size 50 leaves [0, 1]
        let c = cfg("exp:1", 50, 0.05, 500, None);
        assert_eq!(sim.rejection_rate(&c, Method::Sherman).unwrap().rate, 1.0);
    }

    #[test]
    fn censoring_fraction_is_reported() {
        let c = cfg("exp:1", 40, 0.05, 2_000, Some(0.4));
        let row = rejection_rate(&c, Method::Censored).unwrap();
        assert!((row.censored_fraction.unwrap() - 0.4).abs() < 0.01);
        assert!((row.censoring_bound.unwrap() - 2.231_611_884).abs() < 1e-6);
    }
}
