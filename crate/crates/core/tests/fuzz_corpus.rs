//! Replays the fuzz seed corpora through the fuzz-target invariants, and
//! throws arbitrary input at every parser.

use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;

use unifit::io::{
    parse_cache, parse_dataset, parse_report, render_cache, Dataset, StandardizeSpec,
};
use unifit::montecarlo::{
    calibrate_censoring, censoring_rate, parse_power_table, DistributionSpec,
};

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus {target}");
    files.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

fn dataset(data: &[u8]) {
    let Ok(d) = parse_dataset(data) else { return };
    assert!(!d.is_empty());
    assert!(d.times().iter().all(|t| t.is_finite()));
    if let Dataset::Censored { times, status } = &d {
        assert_eq!(times.len(), status.len());
        assert!(status.iter().all(|&s| s <= 1));
    }
}

fn report(text: &str) -> bool {
    let Ok(r) = parse_report(text) else {
        return false;
    };
    assert_eq!(parse_report(&r.to_json()).unwrap(), r);
    true
}

fn cache(text: &str) -> bool {
    let Ok(tables) = parse_cache(text) else {
        return false;
    };
    assert_eq!(parse_cache(&render_cache(&tables)).unwrap(), tables);
    true
}

fn power_table(text: &str) -> bool {
    let Ok(t) = parse_power_table(text) else {
        return false;
    };
    assert_eq!(parse_power_table(&t.to_json()).unwrap(), t);
    true
}

fn dist(text: &str) -> bool {
    let Ok(spec) = text.parse::<DistributionSpec>() else {
        return false;
    };
    assert_eq!(spec.to_string().parse::<DistributionSpec>().unwrap(), spec);
    for u in [0.0, 0.5, 1.0, 3.0] {
        assert!((0.0..=1.0).contains(&spec.survival(u)), "{spec}");
    }
    if let Ok(c) = calibrate_censoring(&spec, 0.3) {
        assert!((censoring_rate(&spec, c) - 0.3).abs() <= 1e-8, "{spec}");
    }
    true
}

fn standardize(text: &str) -> bool {
    let Ok(spec) = text.parse::<StandardizeSpec>() else {
        return false;
    };
    let values = [0.0, 2.5, 23.0, -4.0, 1e300];
    if let Ok((scaled, _)) = spec.apply(&values) {
        assert_eq!(scaled.len(), values.len());
    }
    true
}

fn utf8(data: &[u8]) -> &str {
    std::str::from_utf8(data).expect("seed is utf-8")
}

#[test]
fn seeds_satisfy_target_invariants() {
    for data in corpus("parse_dataset") {
        dataset(&data);
    }
    for (target, check) in [
        ("parse_report", report as fn(&str) -> bool),
        ("parse_cache", cache),
        ("parse_power_table", power_table),
    ] {
        for data in corpus(target) {
            assert!(check(utf8(&data)), "{target} seed rejected");
        }
    }
    let dists = corpus("dist_spec");
    assert!(dists.iter().all(|d| dist(utf8(d))));
    let specs = corpus("standardize_spec");
    let accepted = specs.iter().filter(|d| standardize(utf8(d))).count();
    assert_eq!(accepted, specs.len() - 1, "only range:5,5 is invalid");
}

proptest! {
    #[test]
    fn parsers_never_panic(data in proptest::collection::vec(any::<u8>(), 0..256)) {
        dataset(&data);
        if let Ok(text) = std::str::from_utf8(&data) {
            report(text);
            cache(text);
            power_table(text);
            dist(text);
            standardize(text);
        }
    }

    #[test]
    fn near_valid_text_never_panics(
        text in "(time|time,status)\n([0-9.eE+-]{0,6}(,[01 x]{0,2})?\n){0,6}",
        spec in "(uniform|exp|gamma|weibull|pareto|range|minmax|none):?[0-9.e+-]{0,8}(,[0-9.e+-]{0,8})?",
    ) {
        dataset(text.as_bytes());
        dist(&spec);
        standardize(&spec);
    }

    #[test]
    fn dist_specs_round_trip(a in 1e-3f64..50.0, b in 1e-3f64..50.0, family in 0usize..5) {
        let text = match family {
            0 => format!("uniform:0,{a}"),
            1 => format!("exp:{a}"),
            2 => format!("gamma:{a},{b}"),
            3 => format!("weibull:{a},{b}"),
            _ => format!("pareto:{a},{b}"),
        };
        prop_assert!(dist(&text), "{}", text);
    }
}
