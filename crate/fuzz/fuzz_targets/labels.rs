#![no_main]

use hecketree::labels::{
    check_label, format_m, format_spherical, parse_iwahori, parse_m, parse_monomial, parse_sl2,
    parse_spherical,
};
use hecketree::spherical::SphericalParams;
use hecketree::Family;
use libfuzzer_sys::fuzz_target;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 65521];

// First byte picks the parser, the rest is the label.
fuzz_target!(|data: &[u8]| {
    let Some((&tag, rest)) = data.split_first() else {
        return;
    };
    let Ok(s) = std::str::from_utf8(rest) else {
        return;
    };
    match tag % 6 {
        0 => {
            let p = if tag & 0x80 == 0 {
                SphericalParams::homogeneous(2).unwrap()
            } else {
                SphericalParams::two_orbit(2, 3).unwrap()
            };
            if let Ok(n) = parse_spherical(s, &p) {
                assert_eq!(parse_spherical(&format_spherical(n, &p), &p).unwrap(), n);
            }
        }
        1 => {
            if let Ok(w) = parse_iwahori(s) {
                assert_eq!(parse_iwahori(&w.to_string()).unwrap(), w);
            }
        }
        2 => {
            if let Ok(m) = parse_m(s) {
                assert_eq!(parse_m(&format_m(m)).unwrap(), m);
            }
        }
        3 => {
            if let Ok(x) = parse_monomial(s) {
                assert_eq!(parse_monomial(&x.to_string()).unwrap(), x);
            }
        }
        4 => {
            let p = PRIMES[(tag as usize / 6) % PRIMES.len()];
            if let Ok(u) = parse_sl2(s, p) {
                let text = u.to_string();
                assert_eq!(parse_sl2(&text, p).unwrap(), u);
                assert!(check_label(Family::Sl2, &text).is_ok());
            }
        }
        _ => {
            for f in [
                Family::Spherical,
                Family::Iwahori,
                Family::AffineEnd,
                Family::Sl2,
            ] {
                let _ = check_label(f, s);
            }
        }
    }
});
