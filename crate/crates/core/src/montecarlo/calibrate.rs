//! Choosing the censoring bound `c` so that `C ~ U(0, c)` censors a target
//! fraction of lifetimes:
//!
//! `P(X > C) = (1/c) ∫₀^c S_X(u) du`,
//!
//! which falls continuously from `S_X(0) = 1` towards 0 as `c` grows.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{tag, StreamFamily};

use super::dist::DistributionSpec;

/// `∫₀^c S_X(u) du`, i.e. `E[min(X, c)]`.
pub fn integrated_survival(spec: &DistributionSpec, c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    match *spec {
        DistributionSpec::Uniform { a, b } => {
            // S = 1 on [0, a], linear to 0 on [a, b]
            let flat = c.min(a).max(0.0);
            let top = c.min(b);
            let ramp = if top > a {
                ((b - a) * (b - a) - (b - top) * (b - top)) / (2.0 * (b - a))
            } else {
                0.0
            };
            flat + ramp
        }
        DistributionSpec::Exponential { rate } => -(-rate * c).exp_m1() / rate,
        DistributionSpec::Pareto { scale, shape } => {
            if c <= scale {
                c
            } else if (shape - 1.0).abs() < 1e-12 {
                scale + scale * (c / scale).ln()
            } else {
                scale
                    + scale.powf(shape) * (c.powf(1.0 - shape) - scale.powf(1.0 - shape))
                        / (1.0 - shape)
            }
        }
        DistributionSpec::Gamma { .. } | DistributionSpec::Weibull { .. } => {
            adaptive_simpson(&|u| spec.survival(u), 0.0, c, 1e-13 * c.max(1.0), 48)
        }
    }
}

/// Censoring fraction `P(X > C)` for `C ~ U(0, c)`.
pub fn censoring_rate(spec: &DistributionSpec, c: f64) -> f64 {
    integrated_survival(spec, c) / c
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Brent's method on a bracketing interval `f(a)·f(b) <= 0`.
pub fn brent<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
) -> Option<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Some(b)
}

/// Bound `c` with `|P(X > C) - target| <= 1e-8` for `C ~ U(0, c)`.
pub fn calibrate_censoring(spec: &DistributionSpec, target: f64) -> Result<f64> {
    spec.validate()?;
    if spec.support_min() < 0.0 {
        return Err(Error::Argument(format!(
            "lifetimes from {spec} can be negative; censoring calibration needs support in [0, inf)"
        )));
    }
    // The rate runs from 1 (c -> 0) down to 0 (c -> inf), exclusive.
    let unattainable = || Error::Calibration {
        target,
        low: 0.0,
        high: 1.0,
    };
    if !(target > 0.0 && target < 1.0) {
        return Err(unattainable());
    }
    let f = |c: f64| censoring_rate(spec, c) - target;

    let mut hi = spec.support_min().max(1.0);
    while f(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(unattainable());
        }
    }
    let mut lo = hi;
    while f(lo) <= 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(unattainable());
        }
    }
    let c = brent(f, lo, hi, 1e-15 * hi, 500).ok_or_else(unattainable)?;
    let achieved = censoring_rate(spec, c);
    if (achieved - target).abs() > 1e-8 {
        return Err(Error::Calibration {
            target,
            low: 0.0,
            high: 1.0,
        });
    }
    Ok(c)
}

/// Fraction of `pairs` simulated `(X, C)` draws, `C ~ U(0, c)`, with
/// `X > C`.
pub fn empirical_censoring_fraction(
    spec: &DistributionSpec,
    c: f64,
    pairs: usize,
    seed: u64,
) -> f64 {
    let mut rng = StreamFamily::new(seed, &[tag("censoring-check"), c.to_bits()]).stream(0);
    let censored = (0..pairs)
        .filter(|_| {
            let x = spec.draw(&mut rng);
            x > c * rng.random::<f64>()
        })
        .count();
    censored as f64 / pairs as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent bisection on the defining identity.
    fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn uniform_targets_are_analytic() {
        let u = DistributionSpec::uniform(0.0, 1.0).unwrap();
        // P = 1/(2c) for c >= 1
        assert!((calibrate_censoring(&u, 0.2).unwrap() - 2.5).abs() < 1e-9);
        assert!((calibrate_censoring(&u, 0.4).unwrap() - 1.25).abs() < 1e-9);
        // below 1/2 the bound sits inside the support: P = 1 - c/2
        assert!((calibrate_censoring(&u, 0.75).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn exponential_targets_match_bisection() {
        let e = DistributionSpec::exponential(1.0).unwrap();
        for (target, frozen) in [(0.2, 4.965_114_231_744_276), (0.4, 2.231_611_884_023_022_4)] {
            let oracle = bisect(|c: f64| (1.0 - (-c).exp()) / c - target, 1e-6, 100.0);
            assert!((oracle - frozen).abs() < 1e-9, "{oracle}");
            let c = calibrate_censoring(&e, target).unwrap();
            assert!((c - oracle).abs() < 1e-7, "{c} vs {oracle}");
        }
    }

    #[test]
    fn quadrature_families_agree_with_closed_forms() {
        // weibull(1, s) and gamma(1, s) are exponential(1/s)
        let e = DistributionSpec::exponential(0.5).unwrap();
        let w = DistributionSpec::weibull(1.0, 2.0).unwrap();
        let g = DistributionSpec::gamma(1.0, 2.0).unwrap();
        for c in [0.3, 2.0, 9.0, 40.0] {
            let exact = integrated_survival(&e, c);
            assert!((integrated_survival(&w, c) - exact).abs() < 1e-10);
            assert!((integrated_survival(&g, c) - exact).abs() < 1e-9);
        }
        // weibull(2, 1): E[min(X, c)] -> Γ(1.5) = √π/2 as c grows
        let w2 = DistributionSpec::weibull(2.0, 1.0).unwrap();
        assert!((integrated_survival(&w2, 12.0) - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn pareto_is_attainable() {
        let p = DistributionSpec::pareto(1.0, 1.0).unwrap();
        for target in [0.2, 0.4] {
            let c = calibrate_censoring(&p, target).unwrap();
            let oracle = bisect(|c: f64| (1.0 + c.ln()) / c - target, 1.0, 1e4);
            assert!((c - oracle).abs() < 1e-7 * oracle);
        }
        let p2 = DistributionSpec::pareto(2.0, 3.0).unwrap();
        let c = calibrate_censoring(&p2, 0.3).unwrap();
        assert!((censoring_rate(&p2, c) - 0.3).abs() <= 1e-8);
    }

    #[test]
    fn rejects_unattainable_targets() {
        let u = DistributionSpec::uniform(0.0, 1.0).unwrap();
        for t in [0.0, 1.0, 1.5, -0.2, f64::NAN] {
            assert!(matches!(
                calibrate_censoring(&u, t),
                Err(Error::Calibration { .. })
            ));
        }
        let neg = DistributionSpec::uniform(-1.0, 1.0).unwrap();
        assert!(calibrate_censoring(&neg, 0.2).is_err());
    }

    #[test]
    fn brent_finds_simple_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 100).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(brent(|x| x * x + 1.0, 0.0, 2.0, 1e-15, 100).is_none());
    }
}
