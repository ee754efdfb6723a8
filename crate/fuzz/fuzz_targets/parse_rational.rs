#![no_main]

use libfuzzer_sys::fuzz_target;
use negasalem::text::{format_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = parse_rational(text) {
        let printed = format_rational(&x);
        assert_eq!(parse_rational(&printed).expect("canonical form parses"), x);
    }
});
