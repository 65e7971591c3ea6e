#![no_main]
use libfuzzer_sys::fuzz_target;
use unifit::io::{parse_dataset, Dataset};

fuzz_target!(|data: &[u8]| {
    let Ok(d) = parse_dataset(data) else { return };
    assert!(!d.is_empty());
    assert!(d.times().iter().all(|t| t.is_finite()));
    if let Dataset::Censored { times, status } = &d {
        assert_eq!(times.len(), status.len());
        assert!(status.iter().all(|&s| s <= 1));
        let _ = d.to_censored();
    } else {
        let _ = d.to_sample();
    }
});
