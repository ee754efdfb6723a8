//! Increments of `h` over digit-constrained sets and monotonicity probes.

use num_bigint::BigInt;
use num_traits::{One, Pow};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::indexseq::IndexSequence;
use crate::numeration::{cylinder, value_of, Digit, DigitSeq, Interval, NumerationSystem};
use crate::Rational;

use super::{eval_h, eval_h_at, BoundedValue, SalemParams};

fn check_constraints(sys: &NumerationSystem, constrained: &[(usize, Digit)]) -> Result<()> {
    for (j, &(pos, digit)) in constrained.iter().enumerate() {
        if pos == 0 {
            return Err(Error::Argument("constrained positions start at 1".into()));
        }
        if constrained[..j].iter().any(|&(p, _)| p == pos) {
            return Err(Error::Argument(format!("position {pos} is constrained twice")));
        }
        sys.check_digits(&[digit], pos)?;
    }
    Ok(())
}

/// `Π_j p̈_{c_{n_j}}`, the increment of `h` over the set of numbers whose
/// digit at each `n_j` is fixed to `c_{n_j}`.
pub fn increment(
    params: &SalemParams,
    s: &IndexSequence,
    constrained: &[(usize, Digit)],
) -> Result<Rational> {
    check_constraints(params.system(), constrained)?;
    let mut product = Rational::one();
    for &(pos, digit) in constrained {
        if s.index_of(pos).is_none() {
            return Err(Error::Argument(format!(
                "position {pos} is never read by {s}"
            )));
        }
        product *= params.p_dd(digit, pos);
    }
    Ok(product)
}

/// `h(sup Λ) - h(inf Λ)` over a cylinder, each endpoint evaluated on the
/// expansion that lies inside the cylinder.
pub fn cylinder_increment(
    params: &SalemParams,
    s: &IndexSequence,
    prefix: &[Digit],
    tol: f64,
) -> Result<BoundedValue> {
    let sys = params.system();
    cylinder(prefix, sys)?;
    let low_tail = DigitSeq::new(prefix.to_vec(), sys.low_period())?;
    let high_tail = DigitSeq::new(prefix.to_vec(), sys.high_period())?;
    let (lo, hi) = if prefix.len() % 2 == 0 {
        (low_tail, high_tail)
    } else {
        (high_tail, low_tail)
    };
    let h_lo = eval_h(params, s, &lo, tol)?;
    let h_hi = eval_h(params, s, &hi, tol)?;
    Ok(BoundedValue {
        value: h_hi.value - h_lo.value,
        err: h_hi.err + h_lo.err,
    })
}

/// Exact extent of a digit-constrained set, next to the closed-form width
/// `1 - Σ_j (q-1)/q^{n_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetBounds {
    pub bounds: Interval,
    pub inf_repr: DigitSeq,
    pub sup_repr: DigitSeq,
    pub width_formula: Rational,
}

impl SetBounds {
    pub fn formula_agrees(&self) -> bool {
        self.bounds.width() == self.width_formula
    }
}

/// Infimum and supremum of `{x : i_{n_j}(x) = c_{n_j}}`. Each free digit is
/// pushed to its extreme independently: `q-1` at odd positions and `0` at
/// even ones minimizes, the reverse maximizes.
pub fn set_bounds(sys: &NumerationSystem, constrained: &[(usize, Digit)]) -> Result<SetBounds> {
    check_constraints(sys, constrained)?;
    let last = constrained.iter().map(|&(p, _)| p).max().unwrap_or(0);
    let top = sys.max_digit();
    let extreme = |minimize: bool| -> Result<DigitSeq> {
        let pick = |pos: usize| {
            let odd = pos % 2 == 1;
            if odd == minimize {
                top
            } else {
                0
            }
        };
        let pre = (1..=last)
            .map(|pos| {
                constrained
                    .iter()
                    .find(|&&(p, _)| p == pos)
                    .map_or_else(|| pick(pos), |&(_, d)| d)
            })
            .collect();
        DigitSeq::new(pre, vec![pick(last + 1), pick(last + 2)])
    };
    let inf_repr = extreme(true)?;
    let sup_repr = extreme(false)?;
    let q = BigInt::from(sys.q());
    let width_formula = constrained.iter().fold(Rational::one(), |acc, &(pos, _)| {
        acc - Rational::new(&q - 1, Pow::pow(&q, pos))
    });
    Ok(SetBounds {
        bounds: Interval {
            lo: value_of(&inf_repr, sys)?,
            hi: value_of(&sup_repr, sys)?,
        },
        inf_repr,
        sup_repr,
        width_formula,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub grid_size: usize,
    /// Cylinders of rank `1..=scan_rank` are searched for witnesses.
    pub scan_rank: usize,
    /// Extra digits enumerated inside each scanned cylinder.
    pub scan_depth: usize,
    pub tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            grid_size: 10_000,
            scan_rank: 6,
            scan_depth: 6,
            tol: 1e-10,
        }
    }
}

/// Order behaviour of `h` on the points `prefix ++ e ++ 0^∞` for every
/// extension `e` of `scan_depth` digits.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderScan {
    pub prefix: Vec<Digit>,
    /// Adjacent `x_a < x_b` with `h(x_a) > h(x_b)` beyond the error bounds.
    pub falling: Option<(Rational, Rational)>,
    /// Adjacent `x_a < x_b` with `h(x_a) < h(x_b)` beyond the error bounds.
    pub rising: Option<(Rational, Rational)>,
    /// `max h - min h` over the scanned points.
    pub spread: f64,
}

impl CylinderScan {
    pub fn is_non_monotone(&self) -> bool {
        self.falling.is_some() && self.rising.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub grid_size: usize,
    /// Adjacent grid pairs where `h` decreases beyond the error bounds.
    pub increasing_violations: usize,
    /// The first few violating pairs.
    pub witness_pairs: Vec<(Rational, Rational)>,
    pub cylinder_scan: Vec<CylinderScan>,
}

const MAX_WITNESSES: usize = 16;

fn all_prefixes(q: u32, len: usize) -> Vec<Vec<Digit>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Digit>| {
                (0..q).map(move |d| {
                    let mut next = p.clone();
                    next.push(d);
                    next
                })
            })
            .collect();
    }
    out
}

/// `dom_inf + i·(dom_sup - dom_inf)/(n-1)` for `i = 0..n`.
pub(crate) fn domain_grid(sys: &NumerationSystem, n: usize) -> Vec<Rational> {
    let lo = sys.dom_inf();
    let step = sys.domain().width() / Rational::from_integer(BigInt::from(n - 1));
    (0..n)
        .map(|i| &lo + &step * Rational::from_integer(BigInt::from(i)))
        .collect()
}

pub fn scan_cylinder(
    params: &SalemParams,
    s: &IndexSequence,
    prefix: &[Digit],
    depth: usize,
    tol: f64,
) -> Result<CylinderScan> {
    let sys = params.system();
    let mut points = all_prefixes(sys.q(), depth)
        .into_iter()
        .map(|ext| {
            let mut digits = prefix.to_vec();
            digits.extend(ext);
            let seq = DigitSeq::terminating(digits);
            let x = value_of(&seq, sys)?;
            Ok((x, eval_h(params, s, &seq, tol)?))
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.0.cmp(&b.0));
    let mut scan = CylinderScan {
        prefix: prefix.to_vec(),
        falling: None,
        rising: None,
        spread: 0.0,
    };
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, h) in &points {
        min = min.min(h.value);
        max = max.max(h.value);
    }
    scan.spread = max - min;
    for w in points.windows(2) {
        let (a, ha) = &w[0];
        let (b, hb) = &w[1];
        let slack = ha.err + hb.err;
        if scan.falling.is_none() && hb.value < ha.value - slack {
            scan.falling = Some((a.clone(), b.clone()));
        }
        if scan.rising.is_none() && hb.value > ha.value + slack {
            scan.rising = Some((a.clone(), b.clone()));
        }
    }
    Ok(scan)
}

/// Grid test for order violations plus a witness search in every
/// cylinder of rank up to `opts.scan_rank`.
pub fn monotonicity_report(
    params: &SalemParams,
    s: &IndexSequence,
    opts: &ScanOptions,
) -> Result<MonotonicityReport> {
    if opts.grid_size < 2 {
        return Err(Error::Argument("grid needs at least two points".into()));
    }
    let sys = params.system();
    let grid = domain_grid(sys, opts.grid_size);
    let values = grid
        .par_iter()
        .map(|x| eval_h_at(params, s, x, opts.tol))
        .collect::<Result<Vec<_>>>()?;
    let mut increasing_violations = 0;
    let mut witness_pairs = Vec::new();
    for i in 1..grid.len() {
        let (prev, cur) = (values[i - 1], values[i]);
        if cur.value < prev.value - (prev.err + cur.err) {
            increasing_violations += 1;
            if witness_pairs.len() < MAX_WITNESSES {
                witness_pairs.push((grid[i - 1].clone(), grid[i].clone()));
            }
        }
    }
    let prefixes: Vec<Vec<Digit>> = (1..=opts.scan_rank)
        .flat_map(|rank| all_prefixes(sys.q(), rank))
        .collect();
    let cylinder_scan = prefixes
        .par_iter()
        .map(|prefix| scan_cylinder(params, s, prefix, opts.scan_depth, opts.tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotonicityReport {
        grid_size: opts.grid_size,
        increasing_violations,
        witness_pairs,
        cylinder_scan,
    })
}
