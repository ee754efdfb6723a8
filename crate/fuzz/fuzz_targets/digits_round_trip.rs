#![no_main]

use libfuzzer_sys::fuzz_target;
use negasalem::numeration::{digits_of, value_of, NumerationSystem};
use negasalem::Rational;
use num_bigint::BigInt;

fuzz_target!(|input: (u8, i32, u16)| {
    let (q, num, den) = input;
    let q = u32::from(q % 15) + 2;
    // Periods grow with the denominator; keep each run short.
    let den = i64::from(den % 4096) + 1;
    let sys = NumerationSystem::new(q).unwrap();
    let x = Rational::new(BigInt::from(num), BigInt::from(den));
    match digits_of(&x, &sys) {
        Ok(seq) => assert_eq!(value_of(&seq, &sys).unwrap(), x),
        Err(_) => assert!(!sys.contains(&x)),
    }
});
