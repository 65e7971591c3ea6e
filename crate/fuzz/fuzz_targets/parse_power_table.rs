#![no_main]
use libfuzzer_sys::fuzz_target;
use unifit::montecarlo::parse_power_table;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = parse_power_table(text) {
        let again = parse_power_table(&table.to_json()).expect("written table parses");
        assert_eq!(again, table);
        let _ = table.render();
    }
});
