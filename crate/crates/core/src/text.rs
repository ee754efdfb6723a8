//! Text forms shared by the CLI, config files and test fixtures.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// `num/den` in lowest terms; integers keep the `/1`.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Longest digit string accepted for a single integer or decimal part.
const MAX_DIGITS: usize = 4096;

fn parse_int(s: &str) -> Result<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || body.len() > MAX_DIGITS || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid integer {s:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("invalid integer {s:?}: {e}")))
}

/// Parses `a/b`, an integer, or a plain decimal such as `-0.125`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    if let Some((n, d)) = s.split_once('/') {
        let numer = parse_int(n.trim())?;
        let denom = parse_int(d.trim())?;
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {input:?}")));
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.strip_prefix(['-', '+']).unwrap_or(int_part);
        if frac_part.len() > MAX_DIGITS
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(Error::Parse(format!("invalid decimal {input:?}")));
        }
        let whole = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_int(int_digits)?
        };
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let frac = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse::<BigInt>().unwrap_or_default()
        };
        let magnitude = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude.abs() });
    }
    Ok(Rational::from_integer(parse_int(s)?))
}
