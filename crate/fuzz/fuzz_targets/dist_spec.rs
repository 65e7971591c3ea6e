#![no_main]
use libfuzzer_sys::fuzz_target;
use unifit::montecarlo::{calibrate_censoring, censoring_rate, DistributionSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<DistributionSpec>() else {
        return;
    };
    let back: DistributionSpec = spec.to_string().parse().expect("display parses");
    assert_eq!(back, spec);
    for u in [0.0, 0.5, 1.0, 3.0] {
        let s = spec.survival(u);
        assert!((0.0..=1.0).contains(&s), "{spec} S({u}) = {s}");
    }
    if let Ok(c) = calibrate_censoring(&spec, 0.3) {
        assert!((censoring_rate(&spec, c) - 0.3).abs() <= 1e-8);
    }
});
