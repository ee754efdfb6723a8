//! Salem-type functions over nega-q-ary digits.
//!
//! For parameters `p_0, …, p_{q-1}` with `β_i = Σ_{j<i} p_j` and an index
//! sequence `(n_k)`,
//!
//! ```text
//! h(x) = β̈_{i_{n_1}} + Σ_{k≥2} β̈_{i_{n_k}} Π_{r<k} p̈_{i_{n_r}}
//! ```
//!
//! where the double dots replace a digit `i` read at an odd position by
//! `q - 1 - i`. The series is summed until a certified geometric bound on
//! the remainder drops below the requested tolerance.

mod continuity;
mod distribution;
mod integral;
mod measure;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::indexseq::IndexSequence;
use crate::numeration::{Digit, DigitSeq, GreedyDigits, NumerationSystem};
use crate::operators::{gen_shift, ShiftPlan};
use crate::text::format_rational;
use crate::Rational;

pub use continuity::{branch_points, continuity_class, one_sided_values, Continuity, OneSidedLimits};
pub use distribution::{cdf_eta, ks_distance, sample_eta};
pub use integral::{integral_closed_form, integral_exact, integral_riemann, MAX_RIEMANN_CELLS};
pub use measure::{
    cylinder_increment, increment, monotonicity_report, scan_cylinder, set_bounds, CylinderScan,
    MonotonicityReport, ScanOptions, SetBounds,
};

/// Smallest tolerance accepted by the evaluators; below this the
/// floating-point summation error dominates the truncation bound.
pub const MIN_TOL: f64 = 1e-13;

/// A real value with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedValue {
    pub value: f64,
    pub err: f64,
}

impl BoundedValue {
    pub fn exact(value: f64) -> Self {
        Self { value, err: 0.0 }
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.err
    }
}

impl fmt::Display for BoundedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17} ± {:.3e}", self.value, self.err)
    }
}

/// The tuple `(p_0, …, p_{q-1})` and its cumulative sums `β_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SalemParams {
    sys: NumerationSystem,
    p: Vec<Rational>,
    beta: Vec<Rational>,
    p_f: Vec<f64>,
    beta_f: Vec<f64>,
    max_abs_p: f64,
    max_abs_beta: f64,
}

fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl SalemParams {
    pub fn new(q: u32, p: Vec<Rational>) -> Result<Self> {
        let sys = NumerationSystem::new(q)?;
        if p.len() != q as usize {
            return Err(Error::Params(format!(
                "expected {q} weights p_0..p_{}, got {}",
                q - 1,
                p.len()
            )));
        }
        let one = Rational::one();
        for (i, pi) in p.iter().enumerate() {
            if pi.abs() >= one {
                return Err(Error::Params(format!(
                    "p_{i} = {} is outside (-1, 1)",
                    format_rational(pi)
                )));
            }
        }
        let total: Rational = p.iter().sum();
        if total != one {
            return Err(Error::Params(format!(
                "weights sum to {}, not 1",
                format_rational(&total)
            )));
        }
        let mut beta = Vec::with_capacity(p.len());
        let mut acc = Rational::zero();
        for pi in &p {
            beta.push(acc.clone());
            acc += pi;
        }
        for (i, b) in beta.iter().enumerate().skip(1) {
            if !(b.is_positive() && *b < one) {
                return Err(Error::Params(format!(
                    "β_{i} = {} is outside (0, 1)",
                    format_rational(b)
                )));
            }
        }
        let p_f: Vec<f64> = p.iter().map(to_f64).collect();
        let beta_f: Vec<f64> = beta.iter().map(to_f64).collect();
        let max_abs_p = p_f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let max_abs_beta = beta_f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(Self {
            sys,
            p,
            beta,
            p_f,
            beta_f,
            max_abs_p,
            max_abs_beta,
        })
    }

    /// Equal weights `1/q`.
    pub fn uniform(q: u32) -> Result<Self> {
        let w = Rational::new(BigInt::one(), BigInt::from(q.max(1)));
        Self::new(q, vec![w; q as usize])
    }

    pub fn q(&self) -> u32 {
        self.sys.q()
    }

    pub fn system(&self) -> &NumerationSystem {
        &self.sys
    }

    pub fn p(&self) -> &[Rational] {
        &self.p
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn max_abs_p(&self) -> f64 {
        self.max_abs_p
    }

    pub fn is_distribution(&self) -> bool {
        self.p.iter().all(|p| !p.is_negative())
    }

    /// `ï`: the digit as seen by the Salem series when read at position `n`.
    pub fn image_digit(&self, digit: Digit, n: usize) -> Digit {
        if n % 2 == 0 {
            digit
        } else {
            self.sys.max_digit() - digit
        }
    }

    /// `β̈` for digit `i` read at position `n`.
    pub fn beta_dd(&self, digit: Digit, n: usize) -> &Rational {
        &self.beta[self.image_digit(digit, n) as usize]
    }

    /// `p̈` for digit `i` read at position `n`.
    pub fn p_dd(&self, digit: Digit, n: usize) -> &Rational {
        &self.p[self.image_digit(digit, n) as usize]
    }

    /// Bound on `|h|` for any argument plus one more leading term.
    fn tail_bound(&self) -> f64 {
        self.max_abs_beta / (1.0 - self.max_abs_p) + self.max_abs_beta
    }

    /// Sums the series from index `first` on, with `digit(k)` supplying
    /// `i_{n_k}`.
    fn sum_series(
        &self,
        s: &IndexSequence,
        first: usize,
        tol: f64,
        mut digit: impl FnMut(usize) -> Digit,
    ) -> BoundedValue {
        let bound = self.tail_bound();
        let mut value = 0.0;
        let mut weight = 1.0_f64;
        for (terms, k) in (first..).enumerate() {
            let image = self.image_digit(digit(k), s.n_at(k)) as usize;
            value += weight * self.beta_f[image];
            weight *= self.p_f[image];
            let rounding = 4.0 * (terms as f64 + 2.0) * f64::EPSILON * bound;
            let truncation = bound * weight.abs();
            if truncation + rounding < tol {
                return BoundedValue {
                    value,
                    err: truncation + rounding,
                };
            }
        }
        unreachable!("the term range is unbounded")
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_nan() || tol < MIN_TOL {
        return Err(Error::Argument(format!(
            "tolerance must be at least {MIN_TOL:e}, got {tol:e}"
        )));
    }
    Ok(())
}

/// `h(x)` for a digit sequence, to within `tol`.
pub fn eval_h(
    params: &SalemParams,
    s: &IndexSequence,
    x: &DigitSeq,
    tol: f64,
) -> Result<BoundedValue> {
    check_tol(tol)?;
    params.sys.check(x)?;
    Ok(params.sum_series(s, 1, tol, |k| x.digit_at(s.n_at(k))))
}

/// `h(x)` for a rational, reading its greedy expansion lazily.
pub fn eval_h_at(
    params: &SalemParams,
    s: &IndexSequence,
    x: &Rational,
    tol: f64,
) -> Result<BoundedValue> {
    check_tol(tol)?;
    let mut digits = GreedyDigits::new(x, &params.sys)?;
    Ok(params.sum_series(s, 1, tol, |k| digits.digit_at(s.n_at(k))))
}

/// The level-`k` function of the functional-equation system, evaluated on
/// `y = σ_{n̂_{k-1}} ∘ … ∘ σ_{n̂_1}(x)`: the series from term `k` on, with
/// each original digit `i_{n_j}` located at its post-deletion position and
/// the parity taken from the original position `n_j`.
fn eval_level(
    params: &SalemParams,
    s: &IndexSequence,
    level: usize,
    y: &DigitSeq,
    tol: f64,
) -> BoundedValue {
    params.sum_series(s, level, tol, |j| {
        y.digit_at(s.position_after_deletions(j, level))
    })
}

/// `|f(y_{k-1}) - [β̈_{i_{n_k}} + p̈_{i_{n_k}}·f(y_k)]|` for the `k`-th
/// equation of the system, with `y_j` produced by composing generalized
/// shifts over the hatted indices.
pub fn residual(
    params: &SalemParams,
    s: &IndexSequence,
    x: &DigitSeq,
    k: usize,
    tol: f64,
) -> Result<f64> {
    check_tol(tol)?;
    params.sys.check(x)?;
    if k == 0 {
        return Err(Error::Argument("equation index starts at 1".into()));
    }
    let plan = ShiftPlan::new((1..k).map(|j| s.n_at(j)).collect())?;
    let before = crate::operators::compose(x, &plan);
    let after = gen_shift(&before, s.hat_n(k));
    let n_k = s.n_at(k);
    let digit = before.digit_at(s.hat_n(k));
    let lhs = eval_level(params, s, k, &before, tol);
    let tail = eval_level(params, s, k + 1, &after, tol);
    let rhs = to_f64(params.beta_dd(digit, n_k)) + to_f64(params.p_dd(digit, n_k)) * tail.value;
    Ok((lhs.value - rhs).abs())
}

/// `(ï_{n_1}, …, ï_{n_count})`: the digits the Salem series consumes.
pub fn image_digits(
    params: &SalemParams,
    s: &IndexSequence,
    x: &DigitSeq,
    count: usize,
) -> Result<Vec<Digit>> {
    params.sys.check(x)?;
    Ok((1..=count)
        .map(|k| {
            let n = s.n_at(k);
            params.image_digit(x.digit_at(n), n)
        })
        .collect())
}

/// Classical Salem partial sum `β_{j_1} + Σ β_{j_k} Π_{r<k} p_{j_r}` over a
/// finite positive-base digit list.
pub fn salem_partial_sum(params: &SalemParams, digits: &[Digit]) -> f64 {
    let mut value = 0.0;
    let mut weight = 1.0;
    for &d in digits {
        value += weight * params.beta_f[d as usize];
        weight *= params.p_f[d as usize];
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeration::digits_of;
    use proptest::prelude::*;

    pub(crate) fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    pub(crate) fn params(q: u32, p: &[(i64, i64)]) -> SalemParams {
        SalemParams::new(q, p.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    fn seq(pre: &[Digit], period: &[Digit]) -> DigitSeq {
        DigitSeq::new(pre.to_vec(), period.to_vec()).unwrap()
    }

    fn example_seq() -> IndexSequence {
        "3,7,9,5,8,12,4,6,10,11,13,14|+2".parse().unwrap()
    }

    // Plain summation of the first `terms` terms, exact rationals.
    fn brute_force(params: &SalemParams, s: &IndexSequence, x: &DigitSeq, terms: usize) -> f64 {
        let mut total = Rational::zero();
        let mut weight = Rational::one();
        for k in 1..=terms {
            let n = s.n_at(k);
            let d = x.digit_at(n);
            total += &weight * params.beta_dd(d, n);
            weight *= params.p_dd(d, n);
        }
        to_f64(&total)
    }

    #[test]
    fn parameter_validation() {
        assert!(SalemParams::new(2, vec![rat(1, 2)]).is_err());
        assert!(SalemParams::new(2, vec![rat(1, 2), rat(1, 3)]).is_err());
        // β_1 = -1/4
        assert!(SalemParams::new(3, vec![rat(-1, 4), rat(3, 4), rat(1, 2)]).is_err());
        // p_1 = 5/4
        assert!(SalemParams::new(2, vec![rat(-1, 4), rat(5, 4)]).is_err());
        // β_1 = 1
        assert!(SalemParams::new(2, vec![rat(1, 1), rat(0, 1)]).is_err());
        let p = params(3, &[(1, 2), (-1, 4), (3, 4)]);
        assert_eq!(p.beta(), &[rat(0, 1), rat(1, 2), rat(1, 4)]);
        assert!(!p.is_distribution());
    }

    #[test]
    fn parity_views() {
        let p = params(3, &[(1, 5), (1, 2), (3, 10)]);
        assert_eq!(p.image_digit(0, 2), 0);
        assert_eq!(p.image_digit(0, 3), 2);
        assert_eq!(p.p_dd(0, 1), &rat(3, 10));
        assert_eq!(p.beta_dd(2, 4), &rat(7, 10));
        let even: Rational = (0..3).map(|i| p.beta_dd(i, 2).clone()).sum();
        let odd: Rational = (0..3).map(|i| p.beta_dd(i, 1).clone()).sum();
        assert_eq!(even, odd);
    }

    #[test]
    fn eval_examples() {
        let p = SalemParams::uniform(2).unwrap();
        let id = IndexSequence::identity();
        let tol = 1e-10;
        let at = |s: DigitSeq| eval_h(&p, &id, &s, tol).unwrap();
        let low = at(seq(&[], &[1, 0]));
        assert!(low.contains(0.0) && low.err <= tol);
        assert!(at(seq(&[], &[0, 1])).contains(1.0));
        assert!(at(DigitSeq::zero()).contains(2.0 / 3.0));
        assert!(eval_h(&p, &id, &DigitSeq::zero(), 0.0).is_err());
        assert!(eval_h(&p, &id, &seq(&[2], &[0]), tol).is_err());
    }

    #[test]
    fn eval_matches_brute_force() {
        let tol = 1e-12;
        let cases = [
            (params(2, &[(1, 3), (2, 3)]), IndexSequence::identity(), seq(&[1, 0, 0], &[1, 1, 0])),
            (params(2, &[(1, 3), (2, 3)]), example_seq(), seq(&[1], &[0, 1, 1, 0, 1])),
            (params(3, &[(1, 2), (-1, 4), (3, 4)]), "2,1".parse().unwrap(), seq(&[2, 0], &[1, 2])),
        ];
        for (p, s, x) in cases {
            let v = eval_h(&p, &s, &x, tol).unwrap();
            assert!((v.value - brute_force(&p, &s, &x, 200)).abs() <= v.err + 1e-15);
        }
    }

    #[test]
    fn rational_and_sequence_evaluation_agree() {
        let p = params(3, &[(1, 5), (1, 2), (3, 10)]);
        let s = example_seq();
        for (n, d) in [(0, 1), (-1, 7), (1, 5), (-3, 4), (1, 4)] {
            let x = rat(n, d);
            let a = eval_h_at(&p, &s, &x, 1e-11).unwrap();
            let b = eval_h(&p, &s, &digits_of(&x, p.system()).unwrap(), 1e-11).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn endpoint_normalization() {
        let id = IndexSequence::identity();
        for p in [params(2, &[(1, 3), (2, 3)]), SalemParams::uniform(5).unwrap()] {
            let sys = *p.system();
            let lo = eval_h(&p, &id, &seq(&[], &sys.low_period()), 1e-10).unwrap();
            let hi = eval_h(&p, &id, &seq(&[], &sys.high_period()), 1e-10).unwrap();
            assert!(lo.value.abs() <= 1e-10);
            assert!((hi.value - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn residual_examples() {
        let p = params(2, &[(1, 3), (2, 3)]);
        let tol = 1e-10;
        let bound = 3.0 * tol * (1.0 + p.max_abs_p());
        let x = seq(&[1, 0, 1, 1], &[0, 1, 1]);
        assert!(residual(&p, &IndexSequence::identity(), &x, 1, tol).unwrap() <= bound);
        assert!(residual(&p, &example_seq(), &x, 4, tol).unwrap() <= bound);
        for k in 1..=8 {
            assert!(residual(&p, &example_seq(), &DigitSeq::zero(), k, tol).unwrap() <= bound);
        }
        assert!(residual(&p, &example_seq(), &x, 0, tol).is_err());
    }

    #[test]
    fn image_digit_examples() {
        let p2 = SalemParams::uniform(2).unwrap();
        let id = IndexSequence::identity();
        assert_eq!(
            image_digits(&p2, &id, &seq(&[], &[1, 0]), 6).unwrap(),
            vec![0; 6]
        );
        let p3 = SalemParams::uniform(3).unwrap();
        let x = seq(&[1, 1, 0, 2], &[0]);
        assert_eq!(image_digits(&p3, &id, &x, 4).unwrap(), vec![1, 1, 2, 2]);
    }

    #[test]
    fn image_digits_reproduce_h() {
        let p = params(3, &[(1, 5), (1, 2), (3, 10)]);
        let s = example_seq();
        let x = seq(&[2, 1, 0, 2, 2], &[1, 0, 2]);
        let h = eval_h(&p, &s, &x, 1e-12).unwrap();
        let digits = image_digits(&p, &s, &x, 120).unwrap();
        assert!((salem_partial_sum(&p, &digits) - h.value).abs() <= h.err + 1e-14);
    }

    fn seq_strategy(q: u32) -> impl Strategy<Value = DigitSeq> {
        (
            prop::collection::vec(0..q, 0..12),
            prop::collection::vec(0..q, 1..7),
        )
            .prop_map(|(pre, period)| DigitSeq::new(pre, period).unwrap())
    }

    proptest! {
        #[test]
        fn doubling_terms_stays_within_bound(x in seq_strategy(2)) {
            let p = params(2, &[(1, 3), (2, 3)]);
            for s in [IndexSequence::identity(), example_seq()] {
                let v = eval_h(&p, &s, &x, 1e-9).unwrap();
                let terms = (1e-9f64.ln() / (2.0f64 / 3.0).ln()).ceil() as usize;
                let longer = brute_force(&p, &s, &x, 2 * terms + 20);
                prop_assert!((v.value - longer).abs() <= v.err);
            }
        }

        #[test]
        fn nonnegative_weights_give_unit_range(x in seq_strategy(3)) {
            let p = params(3, &[(1, 5), (1, 2), (3, 10)]);
            let v = eval_h(&p, &example_seq(), &x, 1e-10).unwrap();
            prop_assert!(v.value >= -v.err && v.value <= 1.0 + v.err);
        }
    }
}
