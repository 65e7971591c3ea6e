use rand::Rng;

use unifit::censored::{censored_test, censoring_km, delta_c, ipcw_weights, WeightMode};
use unifit::rng::{tag, StreamFamily};
use unifit::{CensoredObservation, CensoredSample};

const SEED: u64 = 11;

/// U(0,1) lifetimes censored by U(0, c).
fn draw(family: &StreamFamily, rep: u64, n: usize, c: f64) -> Option<CensoredSample> {
    let mut rng = family.stream(rep);
    let obs = (0..n)
        .map(|_| {
            let x: f64 = rng.random();
            let cut = c * rng.random::<f64>();
            CensoredObservation::new(x.min(cut), x <= cut)
        })
        .collect();
    CensoredSample::new(obs).ok()
}

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn ipcw_estimate_is_centred_under_the_null() {
    let family = StreamFamily::new(SEED, &[tag("unbiased")]);
    let values: Vec<f64> = (0..10_000)
        .filter_map(|r| draw(&family, r, 100, 2.5))
        .map(|cs| delta_c(&cs).unwrap())
        .collect();
    let (m, se) = mean_and_se(&values);
    assert!(m.abs() < 4.0 * se, "mean {m}, se {se}");
}

/// `Σ δᵢ/K̂(Yᵢ-) = n·(1 - Ŝ(max Y))`: the weights carry all the mass unless
/// the largest time is censored.
#[test]
fn weights_preserve_mass() {
    let family = StreamFamily::new(SEED, &[tag("mass")]);
    let mut means = Vec::new();
    for cs in (0..2_000).filter_map(|r| draw(&family, r, 100, 2.5)) {
        let w = ipcw_weights(&cs, &censoring_km(&cs), WeightMode::LeftLimit);
        let total: f64 = w.weights.iter().sum();
        let last = cs
            .observations()
            .iter()
            .max_by(|a, b| a.time.total_cmp(&b.time))
            .unwrap();
        if last.event {
            assert!((total - cs.len() as f64).abs() < 1e-9, "{total}");
        } else {
            assert!(total <= cs.len() as f64 + 1e-9);
        }
        means.push(total / cs.len() as f64);
    }
    let (m, se) = mean_and_se(&means);
    assert!(m <= 1.0 + 4.0 * se && m > 0.999, "mean {m}, se {se}");
}

#[test]
fn self_normalized_statistic_has_unit_variance() {
    let family = StreamFamily::new(SEED, &[tag("self-normalized")]);
    let z: Vec<f64> = (0..10_000)
        .filter_map(|r| draw(&family, r, 200, 2.5))
        .map(|cs| censored_test(&cs, 0.05).unwrap().standardized)
        .collect();
    let (m, se) = mean_and_se(&z);
    let var = se * se * z.len() as f64;
    assert!((var - 1.0).abs() < 0.15, "variance {var}, mean {m}");
}
