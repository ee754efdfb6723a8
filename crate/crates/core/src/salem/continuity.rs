use crate::error::{Error, Result};
use crate::indexseq::IndexSequence;
use crate::numeration::{alternate_representation, branch_position, DigitSeq};

use super::{eval_h, BoundedValue, SalemParams};

/// Values of `h` on both expansions of a branch point, oriented by side.
#[derive(Debug, Clone, PartialEq)]
pub struct OneSidedLimits {
    /// Rank `m` of the branch digit.
    pub branch_position: usize,
    pub left: BoundedValue,
    pub right: BoundedValue,
    /// Expansion whose cylinder lies to the left of the point.
    pub left_repr: DigitSeq,
    pub right_repr: DigitSeq,
}

impl OneSidedLimits {
    pub fn jump(&self) -> f64 {
        (self.left.value - self.right.value).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Continuity {
    /// Unique expansion; `h` is continuous there.
    IrrationalContinuous,
    /// Branch point whose one-sided limits agree within `2·tol`.
    Continuous,
    /// Branch point with one-sided limits this far apart.
    Jump(f64),
}

/// One-sided limits of `h` at a nega-q-rational point.
///
/// The expansion ending in `([q-1],0)` is the left endpoint of its rank-`m`
/// cylinder when `m` is even, so it governs the limit from the right; for
/// odd `m` the roles swap.
pub fn one_sided_values(
    params: &SalemParams,
    s: &IndexSequence,
    x0: &DigitSeq,
    tol: f64,
) -> Result<OneSidedLimits> {
    let sys = params.system();
    sys.check(x0)?;
    let (m, other) = match (branch_position(x0, sys), alternate_representation(x0, sys)) {
        (Some(m), Some(other)) => (m, other),
        _ => {
            return Err(Error::NotApplicable(format!(
                "{x0} has a unique expansion"
            )))
        }
    };
    if !s.covers(m) {
        return Err(Error::NotApplicable(format!(
            "index sequence {s} does not reach every position 1..={m}"
        )));
    }
    let (low_tail, high_tail) = if x0.period() == sys.low_period().as_slice() {
        (x0.clone(), other)
    } else {
        (other, x0.clone())
    };
    let (left_repr, right_repr) = if m % 2 == 0 {
        (high_tail, low_tail)
    } else {
        (low_tail, high_tail)
    };
    Ok(OneSidedLimits {
        branch_position: m,
        left: eval_h(params, s, &left_repr, tol)?,
        right: eval_h(params, s, &right_repr, tol)?,
        left_repr,
        right_repr,
    })
}

pub fn continuity_class(
    params: &SalemParams,
    s: &IndexSequence,
    x0: &DigitSeq,
    tol: f64,
) -> Result<Continuity> {
    params.system().check(x0)?;
    if alternate_representation(x0, params.system()).is_none() {
        return Ok(Continuity::IrrationalContinuous);
    }
    let limits = one_sided_values(params, s, x0, tol)?;
    let jump = limits.jump();
    Ok(if jump <= 2.0 * tol {
        Continuity::Continuous
    } else {
        Continuity::Jump(jump)
    })
}

/// Every branch point of rank `1..=max_rank`, written with the
/// `(0,[q-1])` tail.
pub fn branch_points(q: u32, max_rank: usize) -> Vec<DigitSeq> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_rank {
        let mut next = Vec::with_capacity(layer.len() * q as usize);
        for prefix in &layer {
            for d in 0..q {
                let mut p = prefix.clone();
                p.push(d);
                if d + 1 < q {
                    out.push(DigitSeq::new(p.clone(), vec![0, q - 1]).expect("nonempty period"));
                }
                next.push(p);
            }
        }
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::params;
    use super::*;
    use crate::numeration::{cylinder, is_nega_q_rational, value_of, NumerationSystem};
    use crate::salem::eval_h_at;
    use crate::Rational;

    fn seq(pre: &[u32], period: &[u32]) -> DigitSeq {
        DigitSeq::new(pre.to_vec(), period.to_vec()).unwrap()
    }

    #[test]
    fn branch_point_enumeration() {
        let pts = branch_points(2, 3);
        assert_eq!(pts.len(), 1 + 2 + 4);
        let sys = NumerationSystem::new(2).unwrap();
        assert!(pts.iter().all(|p| is_nega_q_rational(p, &sys)));
        assert_eq!(branch_points(3, 2).len(), 2 + 6);
    }

    #[test]
    fn identity_sequence_has_no_jumps() {
        let p = params(2, &[(1, 3), (2, 3)]);
        let id = IndexSequence::identity();
        for x0 in branch_points(2, 5) {
            assert_eq!(
                continuity_class(&p, &id, &x0, 1e-10).unwrap(),
                Continuity::Continuous
            );
        }
    }

    #[test]
    fn swapped_prefix_jumps_at_rank_one() {
        let p = params(2, &[(1, 3), (2, 3)]);
        let s: IndexSequence = "2,1|+0".parse().unwrap();
        // -1/6 = Δ 0(01)^∞ = Δ 1(10)^∞
        let x0 = seq(&[0], &[0, 1]);
        let limits = one_sided_values(&p, &s, &x0, 1e-12).unwrap();
        assert_eq!(limits.branch_position, 1);
        // Rank 1 is odd: the (10)-tail expansion lies to the left.
        assert_eq!(limits.left_repr, seq(&[1], &[1, 0]));
        // Image digits 1,0,1,1,1,… and 0,1,0,0,0,… give 5/9 and 1/9.
        assert!(limits.left.contains(5.0 / 9.0));
        assert!(limits.right.contains(1.0 / 9.0));
        match continuity_class(&p, &s, &x0, 1e-10).unwrap() {
            Continuity::Jump(j) => assert!((j - 4.0 / 9.0).abs() < 1e-9),
            other => panic!("expected a jump, got {other:?}"),
        }
    }

    #[test]
    fn orientation_matches_nearby_points() {
        // Approach the branch point from each side with exact rationals.
        let p = params(2, &[(1, 3), (2, 3)]);
        let s: IndexSequence = "2,1|+0".parse().unwrap();
        let sys = *p.system();
        for x0 in branch_points(2, 4) {
            let limits = match one_sided_values(&p, &s, &x0, 1e-12) {
                Ok(l) => l,
                Err(_) => continue,
            };
            let x = value_of(&x0, &sys).unwrap();
            let eps = Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 40));
            let left = eval_h_at(&p, &s, &(&x - &eps), 1e-12).unwrap();
            let right = eval_h_at(&p, &s, &(&x + &eps), 1e-12).unwrap();
            assert!((left.value - limits.left.value).abs() < 1e-6, "{x0}");
            assert!((right.value - limits.right.value).abs() < 1e-6, "{x0}");
            let c = cylinder(&limits.left_repr.prefix(limits.branch_position), &sys).unwrap();
            assert_eq!(c.hi, x);
        }
    }

    #[test]
    fn classifier_agrees_with_condition() {
        let p = params(3, &[(1, 5), (1, 2), (3, 10)]);
        for s in ["id", "2,1|+0", "2,3,1|+0", "3,1,2,4|+0"] {
            let s: IndexSequence = s.parse().unwrap();
            for x0 in branch_points(3, 4) {
                let m = x0.preperiod().len();
                let class = continuity_class(&p, &s, &x0, 1e-10).unwrap();
                assert_eq!(
                    class == Continuity::Continuous,
                    s.continuity_condition(m),
                    "{s} at {x0}"
                );
            }
        }
    }

    #[test]
    fn odd_tail_offset_is_still_continuous() {
        // The parity clause rejects d = 1, but the two expansions differ
        // only in positions read after n_{k_0}, whose images are constant.
        let p = params(2, &[(1, 3), (2, 3)]);
        let s = IndexSequence::new(vec![1, 2, 3, 4], 1).unwrap();
        let x0 = seq(&[1, 0], &[0, 1]);
        assert!(!s.continuity_condition(2));
        assert_eq!(
            continuity_class(&p, &s, &x0, 1e-10).unwrap(),
            Continuity::Continuous
        );
        let s: IndexSequence = "1,3,2|+0".parse().unwrap();
        let x0 = seq(&[0], &[0, 1]);
        assert!(!s.continuity_condition(1));
        assert_eq!(
            continuity_class(&p, &s, &x0, 1e-10).unwrap(),
            Continuity::Continuous
        );
    }

    #[test]
    fn unique_expansions() {
        let p = params(2, &[(1, 3), (2, 3)]);
        let id = IndexSequence::identity();
        let endpoint = seq(&[], &[1, 0]);
        assert!(matches!(
            one_sided_values(&p, &id, &endpoint, 1e-10),
            Err(Error::NotApplicable(_))
        ));
        assert_eq!(
            continuity_class(&p, &id, &seq(&[], &[0, 1, 1]), 1e-10).unwrap(),
            Continuity::IrrationalContinuous
        );
        // The worked example never reads positions 1 and 2.
        let ex: IndexSequence = "3,7,9,5,8,12,4,6,10,11,13,14|+2".parse().unwrap();
        assert!(matches!(
            continuity_class(&p, &ex, &seq(&[0], &[0, 1]), 1e-10),
            Err(Error::NotApplicable(_))
        ));
    }
}
