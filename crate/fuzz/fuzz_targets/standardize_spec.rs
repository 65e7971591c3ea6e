#![no_main]
use libfuzzer_sys::fuzz_target;
use unifit::io::StandardizeSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<StandardizeSpec>() else {
        return;
    };
    let values = [0.0, 2.5, 23.0, -4.0, 1e300];
    if let Ok((scaled, _)) = spec.apply(&values) {
        assert_eq!(scaled.len(), values.len());
    }
});
