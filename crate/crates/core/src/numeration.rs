//! Nega-q-ary digit expansions.
//!
//! A number `x` in `[-q/(q+1), 1/(q+1)]` is written as `Σ i_k / (-q)^k` with
//! digits `i_k ∈ {0, …, q-1}`. Rational inputs have eventually periodic
//! expansions, which [`DigitSeq`] stores as a finite preperiod followed by a
//! repeating period. All arithmetic is exact.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::text::format_rational;
use crate::Rational;

pub type Digit = u32;

/// The base `-q` together with the endpoints of its representable interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NumerationSystem {
    q: u32,
}

impl NumerationSystem {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidBase(q));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The largest digit, `q - 1`.
    pub fn max_digit(&self) -> Digit {
        self.q - 1
    }

    /// The radix `-q`.
    pub fn radix(&self) -> BigInt {
        -BigInt::from(self.q)
    }

    /// `-q/(q+1)`, the value of `([q-1], 0)` repeating.
    pub fn dom_inf(&self) -> Rational {
        Rational::new(-BigInt::from(self.q), BigInt::from(self.q + 1))
    }

    /// `1/(q+1)`, the value of `(0, [q-1])` repeating.
    pub fn dom_sup(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.q + 1))
    }

    pub fn domain(&self) -> Interval {
        Interval {
            lo: self.dom_inf(),
            hi: self.dom_sup(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.dom_inf() && *x <= self.dom_sup()
    }

    /// Period `([q-1], 0)`, whose value is the domain infimum.
    pub fn low_period(&self) -> Vec<Digit> {
        vec![self.max_digit(), 0]
    }

    /// Period `(0, [q-1])`, whose value is the domain supremum.
    pub fn high_period(&self) -> Vec<Digit> {
        vec![0, self.max_digit()]
    }

    pub fn check_digits(&self, digits: &[Digit], first_position: usize) -> Result<()> {
        for (offset, &digit) in digits.iter().enumerate() {
            if digit >= self.q {
                return Err(Error::InvalidDigit {
                    digit,
                    position: first_position + offset,
                    max: self.max_digit(),
                });
            }
        }
        Ok(())
    }

    pub fn check(&self, seq: &DigitSeq) -> Result<()> {
        self.check_digits(&seq.preperiod, 1)?;
        self.check_digits(&seq.period, seq.preperiod.len() + 1)
    }
}

/// A closed interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.lo && *x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

/// An eventually periodic digit sequence `i_1 i_2 …`.
///
/// Values are always kept canonical: the period is primitive and the
/// preperiod is as short as possible. Terminating expansions have
/// period `[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitSeq {
    preperiod: Vec<Digit>,
    period: Vec<Digit>,
}

impl DigitSeq {
    pub fn new(preperiod: Vec<Digit>, period: Vec<Digit>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Argument("period must be nonempty".into()));
        }
        let mut seq = Self { preperiod, period };
        seq.canonicalize();
        Ok(seq)
    }

    /// Finite digit list followed by zeros.
    pub fn terminating(digits: Vec<Digit>) -> Self {
        let mut seq = Self {
            preperiod: digits,
            period: vec![0],
        };
        seq.canonicalize();
        seq
    }

    pub fn zero() -> Self {
        Self::terminating(Vec::new())
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    /// Digit at 1-based position `n`, in constant time.
    pub fn digit_at(&self, n: usize) -> Digit {
        assert!(n >= 1, "digit positions start at 1");
        let pre = self.preperiod.len();
        if n <= pre {
            self.preperiod[n - 1]
        } else {
            self.period[(n - pre - 1) % self.period.len()]
        }
    }

    /// The first `len` digits.
    pub fn prefix(&self, len: usize) -> Vec<Digit> {
        (1..=len).map(|n| self.digit_at(n)).collect()
    }

    /// Rewrites the same sequence with a preperiod of at least `len` digits
    /// (not canonical until re-canonicalized).
    pub(crate) fn unrolled(&self, len: usize) -> (Vec<Digit>, Vec<Digit>) {
        let mut pre = self.preperiod.clone();
        let mut period = self.period.clone();
        while pre.len() < len {
            let d = period[0];
            pre.push(d);
            period.rotate_left(1);
        }
        (pre, period)
    }

    fn canonicalize(&mut self) {
        let len = self.period.len();
        if let Some(root) = (1..=len)
            .filter(|p| len % p == 0)
            .find(|&p| (p..len).all(|j| self.period[j] == self.period[j - p]))
        {
            self.period.truncate(root);
        }
        while let Some(&last) = self.preperiod.last() {
            if self.period.last() != Some(&last) {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }
}

impl fmt::Display for DigitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |digits: &[Digit]| {
            digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}:{}", join(&self.preperiod), join(&self.period))
    }
}

impl FromStr for DigitSeq {
    type Err = Error;

    /// Parses `pre:period`, each side a comma-separated digit list.
    fn from_str(s: &str) -> Result<Self> {
        let (pre, period) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `pre:period`, got {s:?}")))?;
        let parse_list = |part: &str| -> Result<Vec<Digit>> {
            let part = part.trim();
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|item| {
                    item.trim()
                        .parse::<Digit>()
                        .map_err(|e| Error::Parse(format!("bad digit {item:?}: {e}")))
                })
                .collect()
        };
        let period = parse_list(period)?;
        if period.is_empty() {
            return Err(Error::Parse("period must contain at least one digit".into()));
        }
        Self::new(parse_list(pre)?, period)
    }
}

fn power(base: &BigInt, exp: usize) -> BigInt {
    Pow::pow(base, exp)
}

/// Exact value `Σ i_k/(-q)^k` of an eventually periodic sequence.
pub fn value_of(seq: &DigitSeq, sys: &NumerationSystem) -> Result<Rational> {
    sys.check(seq)?;
    let r = sys.radix();
    // Σ pre_k r^{L-k} and Σ c_j r^{P-j} by Horner.
    let horner = |digits: &[Digit]| {
        digits
            .iter()
            .fold(BigInt::zero(), |acc, &d| acc * &r + BigInt::from(d))
    };
    let head = horner(&seq.preperiod);
    let cycle = horner(&seq.period);
    let rp_minus_one = power(&r, seq.period.len()) - BigInt::one();
    let numer = head * &rp_minus_one + cycle;
    let denom = power(&r, seq.preperiod.len()) * rp_minus_one;
    Ok(Rational::new(numer, denom))
}

/// Value of a finite digit list followed by zeros.
pub fn value_of_prefix(digits: &[Digit], sys: &NumerationSystem) -> Result<Rational> {
    value_of(&DigitSeq::terminating(digits.to_vec()), sys)
}

/// Greedy digit generator for a rational `a/b`.
///
/// The remainder is kept as an integer numerator over the fixed
/// denominator `b`; each step applies `r ↦ -q·r - i`.
#[derive(Debug, Clone)]
pub struct GreedyDigits {
    q: BigInt,
    q_plus_one: BigInt,
    denom: BigInt,
    numer: BigInt,
    emitted: Vec<Digit>,
}

impl GreedyDigits {
    pub fn new(x: &Rational, sys: &NumerationSystem) -> Result<Self> {
        if !sys.contains(x) {
            return Err(Error::OutOfDomain(
                format_rational(x),
                format_rational(&sys.dom_inf()),
                format_rational(&sys.dom_sup()),
            ));
        }
        Ok(Self {
            q: BigInt::from(sys.q()),
            q_plus_one: BigInt::from(sys.q() + 1),
            denom: x.denom().clone(),
            numer: x.numer().clone(),
            emitted: Vec::new(),
        })
    }

    fn remainder_state(&self) -> &BigInt {
        &self.numer
    }

    /// Emits the next digit. With `y = -q·r` the admissible digits are the
    /// integers in `[y - 1/(q+1), y + q/(q+1)]`; the smaller one is taken.
    fn step(&mut self) -> Digit {
        let y_numer = -(&self.q * &self.numer);
        // ceil((y·(q+1)·b - b) / (b·(q+1)))
        let lower = &y_numer * &self.q_plus_one - &self.denom;
        let scale = &self.denom * &self.q_plus_one;
        let ceil = lower.div_ceil(&scale);
        let digit = if ceil.is_negative() { BigInt::zero() } else { ceil };
        self.numer = y_numer - &digit * &self.denom;
        let digit = u32::try_from(&digit).expect("greedy digit fits the alphabet");
        self.emitted.push(digit);
        digit
    }

    /// Digit at 1-based position `n`, generating as needed.
    pub fn digit_at(&mut self, n: usize) -> Digit {
        while self.emitted.len() < n {
            self.step();
        }
        self.emitted[n - 1]
    }
}

/// Exact nega-q-ary expansion of a rational in the domain.
///
/// Ties at branch points resolve to the smaller digit, so nega-q-rational
/// numbers come out with a `(0, [q-1])` tail.
pub fn digits_of(x: &Rational, sys: &NumerationSystem) -> Result<DigitSeq> {
    let mut gen = GreedyDigits::new(x, sys)?;
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    loop {
        let pos = gen.emitted.len();
        if let Some(&start) = seen.get(gen.remainder_state()) {
            let pre = gen.emitted[..start].to_vec();
            let period = gen.emitted[start..pos].to_vec();
            return DigitSeq::new(pre, period);
        }
        seen.insert(gen.remainder_state().clone(), pos);
        gen.step();
    }
}

/// Position `m` of the branch digit for a nega-q-rational sequence.
///
/// A canonical sequence is nega-q-rational exactly when its period is
/// `([q-1],0)` or `(0,[q-1])` and its preperiod is nonempty; the digit
/// before the alternating tail is then the branch digit.
pub fn branch_position(seq: &DigitSeq, sys: &NumerationSystem) -> Option<usize> {
    let alternating = seq.period == sys.low_period() || seq.period == sys.high_period();
    (alternating && !seq.preperiod.is_empty()).then_some(seq.preperiod.len())
}

/// The other representation of a nega-q-rational number, if any:
/// `…i_m ([q-1]0)^∞ = …[i_m - 1] (0[q-1])^∞`.
pub fn alternate_representation(seq: &DigitSeq, sys: &NumerationSystem) -> Option<DigitSeq> {
    let m = branch_position(seq, sys)?;
    let mut pre = seq.preperiod.clone();
    let period = if seq.period == sys.low_period() {
        pre[m - 1] -= 1;
        sys.high_period()
    } else {
        pre[m - 1] += 1;
        sys.low_period()
    };
    DigitSeq::new(pre, period).ok()
}

pub fn is_nega_q_rational(seq: &DigitSeq, sys: &NumerationSystem) -> bool {
    alternate_representation(seq, sys).is_some()
}

/// The cylinder `Λ_{c_1…c_m}`: all numbers whose expansion starts with
/// `prefix`. For even `m` the `([q-1],0)` tail gives the left endpoint,
/// for odd `m` the right one.
pub fn cylinder(prefix: &[Digit], sys: &NumerationSystem) -> Result<Interval> {
    if prefix.is_empty() {
        return Err(Error::Argument("cylinder prefix must be nonempty".into()));
    }
    sys.check_digits(prefix, 1)?;
    let low_tail = value_of(&DigitSeq::new(prefix.to_vec(), sys.low_period())?, sys)?;
    let high_tail = value_of(&DigitSeq::new(prefix.to_vec(), sys.high_period())?, sys)?;
    Ok(if prefix.len() % 2 == 0 {
        Interval {
            lo: low_tail,
            hi: high_tail,
        }
    } else {
        Interval {
            lo: high_tail,
            hi: low_tail,
        }
    })
}

/// Width of every rank-`m` cylinder, `q^{-m}`.
pub fn cylinder_width(rank: usize, sys: &NumerationSystem) -> Rational {
    Rational::new(BigInt::one(), power(&BigInt::from(sys.q()), rank))
}
