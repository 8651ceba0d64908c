#![no_main]

use hecketree::OutputRecord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = OutputRecord::from_json(s) {
        assert_eq!(OutputRecord::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(OutputRecord::from_csv(&r.to_csv()).unwrap(), r);
    }
    if let Ok(r) = OutputRecord::from_csv(s) {
        assert_eq!(OutputRecord::from_csv(&r.to_csv()).unwrap(), r);
    }
});
