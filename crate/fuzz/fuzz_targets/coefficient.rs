#![no_main]

use hecketree::{format_coefficient, parse_coefficient};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = parse_coefficient(s) {
        let text = format_coefficient(&c);
        assert_eq!(parse_coefficient(&text).unwrap(), c);
        assert_eq!(format_coefficient(&parse_coefficient(&text).unwrap()), text);
    }
});
