#![no_main]

use libfuzzer_sys::fuzz_target;
use negasalem::numeration::{value_of, DigitSeq, NumerationSystem};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(seq) = text.parse::<DigitSeq>() else {
        return;
    };
    // Display is canonical and parses back to the same sequence.
    let again: DigitSeq = seq.to_string().parse().expect("display output parses");
    assert_eq!(again, seq);
    if seq.preperiod().len() + seq.period().len() <= 256 {
        let sys = NumerationSystem::new(10).unwrap();
        let _ = value_of(&seq, &sys);
    }
});
