#![no_main]
use libfuzzer_sys::fuzz_target;
use unifit::io::{parse_cache, render_cache};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(tables) = parse_cache(text) {
        let again = parse_cache(&render_cache(&tables)).expect("rendered cache parses");
        assert_eq!(again, tables);
    }
});
