//! Shift operators on digit sequences.
//!
//! `σ` drops the first digit, `σ_m` drops the `m`-th. Both act on
//! [`DigitSeq`] directly, so the result of any composition is again an
//! eventually periodic sequence. The helpers at the bottom evaluate the
//! affine identities these operators satisfy in exact arithmetic.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::numeration::{value_of, value_of_prefix, DigitSeq, NumerationSystem};
use crate::Rational;

/// `σ`: removes the first digit, so `σ(x) = -q·x - i_1`.
pub fn shift(seq: &DigitSeq) -> DigitSeq {
    gen_shift(seq, 1)
}

/// `σ^n`; `σ^0` is the identity.
pub fn shift_n(seq: &DigitSeq, n: usize) -> DigitSeq {
    let pre = seq.preperiod();
    if n <= pre.len() {
        return DigitSeq::new(pre[n..].to_vec(), seq.period().to_vec())
            .expect("period is nonempty");
    }
    let mut period = seq.period().to_vec();
    let turn = (n - pre.len()) % period.len();
    period.rotate_left(turn);
    DigitSeq::new(Vec::new(), period).expect("period is nonempty")
}

/// `σ_m`: deletes the digit at position `m ≥ 1`; later digits move left.
///
/// Deleting inside the periodic tail unrolls the period past `m` first.
pub fn gen_shift(seq: &DigitSeq, m: usize) -> DigitSeq {
    assert!(m >= 1, "generalized shift index starts at 1");
    let (mut pre, period) = seq.unrolled(m);
    pre.remove(m - 1);
    DigitSeq::new(pre, period).expect("period is nonempty")
}

/// A finite deletion order `n_1, …, n_k` together with the corrected
/// positions `n̂_j = n_j - #{i < j : n_i < n_j}` that make successive
/// single deletions hit the intended original digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftPlan {
    indices: Vec<usize>,
    hatted: Vec<usize>,
}

impl ShiftPlan {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if let Some(pos) = indices.iter().position(|&n| n == 0) {
            return Err(Error::Argument(format!(
                "plan index #{} is zero; positions start at 1",
                pos + 1
            )));
        }
        for (j, n) in indices.iter().enumerate() {
            if indices[..j].contains(n) {
                return Err(Error::Argument(format!("plan index {n} repeats")));
            }
        }
        let hatted = indices
            .iter()
            .enumerate()
            .map(|(j, &n)| n - indices[..j].iter().filter(|&&e| e < n).count())
            .collect();
        Ok(Self { indices, hatted })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn hatted(&self) -> &[usize] {
        &self.hatted
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// `σ_{n̂_k} ∘ … ∘ σ_{n̂_1}`: removes the plan's original positions.
pub fn compose(seq: &DigitSeq, plan: &ShiftPlan) -> DigitSeq {
    plan.hatted
        .iter()
        .fold(seq.clone(), |acc, &m| gen_shift(&acc, m))
}

fn inverse_power(q: u32, n: usize) -> Rational {
    let radix = BigInt::from(-i64::from(q));
    Rational::new(BigInt::from(1), Pow::pow(&radix, n))
}

/// `x - [Σ_{k≤n} i_k/(-q)^k + (-q)^{-n}·σ^n(x)]`, zero for every valid input.
pub fn reconstruction_residual(
    seq: &DigitSeq,
    n: usize,
    sys: &NumerationSystem,
) -> Result<Rational> {
    let x = value_of(seq, sys)?;
    let head = value_of_prefix(&seq.prefix(n), sys)?;
    let tail = value_of(&shift_n(seq, n), sys)?;
    Ok(x - head - inverse_power(sys.q(), n) * tail)
}

/// `σ_m(x) - [-q·x - i_m/(-q)^m + (q+1)·Δ_{i_1…i_m 0 0 …}]`, zero for
/// every valid input.
pub fn gen_shift_residual(seq: &DigitSeq, m: usize, sys: &NumerationSystem) -> Result<Rational> {
    if m == 0 {
        return Err(Error::Argument("generalized shift index starts at 1".into()));
    }
    let q = Rational::from_integer(BigInt::from(sys.q()));
    let x = value_of(seq, sys)?;
    let lhs = value_of(&gen_shift(seq, m), sys)?;
    let i_m = Rational::from_integer(BigInt::from(seq.digit_at(m)));
    let truncated = value_of_prefix(&seq.prefix(m), sys)?;
    let rhs = -(&q * x) - i_m * inverse_power(sys.q(), m)
        + (q + Rational::from_integer(1.into())) * truncated;
    Ok(lhs - rhs)
}

/// True when both identities hold exactly for `seq` up to the given depth.
pub fn identities_hold(seq: &DigitSeq, depth: usize, sys: &NumerationSystem) -> Result<bool> {
    for n in 0..=depth {
        if !reconstruction_residual(seq, n, sys)?.is_zero() {
            return Ok(false);
        }
    }
    for m in 1..=depth {
        if !gen_shift_residual(seq, m, sys)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
