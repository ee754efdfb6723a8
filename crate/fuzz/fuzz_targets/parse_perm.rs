#![no_main]

use libfuzzer_sys::fuzz_target;
use negasalem::IndexSequence;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(s) = text.parse::<IndexSequence>() else {
        return;
    };
    let again: IndexSequence = s.to_string().parse().expect("display output parses");
    assert_eq!(again, s);
    let horizon = s.prefix().len() + 8;
    let mut seen = std::collections::HashSet::new();
    for k in 1..=horizon {
        let n = s.n_at(k);
        assert!(seen.insert(n), "n_k repeats at k = {k}");
        assert_eq!(s.index_of(n), Some(k));
        assert!(s.hat_n(k) >= 1);
    }
});
