#![no_main]

use hecketree::ktheory::{pv_k_groups, truncated_limit, BratteliDiagram};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = BratteliDiagram::from_json(s) else {
        return;
    };
    assert_eq!(BratteliDiagram::from_json(&d.to_json()).unwrap(), d);
    // Keep the integer work small; composites grow with every level.
    let k = d.levels().len().min(4) - 1;
    if (0..=k).all(|i| d.rank(i) <= 12) {
        let _ = truncated_limit(&d, k);
    }
    if let Some(a) = d.alpha() {
        if a.rows() <= 12 && a.cols() <= 12 {
            let _ = pv_k_groups(a);
        }
    }
});
