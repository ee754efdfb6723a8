//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Every numeric check is made against an oracle written
//! here rather than against the library's own helpers.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use negasalem::numeration::{cylinder, digits_of, value_of, DigitSeq, NumerationSystem};
use negasalem::operators::{compose, gen_shift, shift_n, ShiftPlan};
use negasalem::salem::{
    branch_points, cdf_eta, continuity_class, eval_h_at, integral_closed_form, integral_exact,
    integral_riemann, ks_distance, monotonicity_report, one_sided_values, residual, sample_eta,
    Continuity, SalemParams, ScanOptions,
};
use negasalem::text::parse_rational;
use negasalem::{IndexSequence, Rational};

const SEED: u64 = 0x5a1e_2024;
const TOL: f64 = 1e-10;
const EXAMPLE: &str = "3,7,9,5,8,12,4,6,10,11,13,14|+2";
const EXAMPLE_HATS: [usize; 11] = [3, 6, 7, 4, 5, 7, 3, 3, 3, 3, 3];

// Pinned tolerances.
const INTEGRAL_TOL: f64 = 1e-3;
const JUMP_WITNESS: f64 = 1e-3;
const KS_BOUND: f64 = 0.01;
// Expansion periods grow with the multiplicative order of -q modulo the
// denominator, so keep denominators moderate.
const MAX_DENOMINATOR: i64 = 2000;

type Criterion = (&'static str, u64, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn params(q: u32, p: &[&str]) -> SalemParams {
    SalemParams::new(q, p.iter().map(|s| parse_rational(s).unwrap()).collect()).unwrap()
}

fn seq(rng: &mut impl Rng, q: u32, max_pre: usize, max_period: usize) -> DigitSeq {
    let pre = (0..rng.gen_range(0..=max_pre)).map(|_| rng.gen_range(0..q)).collect();
    let period = (0..rng.gen_range(1..=max_period)).map(|_| rng.gen_range(0..q)).collect();
    DigitSeq::new(pre, period).unwrap()
}

/// `(-q)^{-k}` by repeated division.
fn weight(q: u32, k: usize) -> Rational {
    let r = Rational::from_integer(BigInt::from(-(q as i64)));
    (0..k).fold(Rational::one(), |acc, _| acc / &r)
}

/// `Σ d_j r^{len-j}` accumulated from the last digit with explicit powers.
fn power_sum(digits: &[u32], r: &BigInt) -> (BigInt, BigInt) {
    let mut pow = BigInt::one();
    let mut sum = BigInt::zero();
    for &d in digits.iter().rev() {
        sum += &pow * d;
        pow *= r;
    }
    (sum, pow)
}

/// Value of an eventually periodic expansion: finite head over `r^L` plus
/// the geometric tail `block / (r^L (r^P - 1))`, with `r = -q`.
fn oracle_value(s: &DigitSeq, q: u32) -> Rational {
    let r = BigInt::from(-(q as i64));
    let (head, r_l) = power_sum(s.preperiod(), &r);
    let (block, r_p) = power_sum(s.period(), &r);
    Rational::new(head, r_l.clone()) + Rational::new(block, r_l * (r_p - 1))
}

fn random_in_domain(rng: &mut impl Rng, q: u32) -> Rational {
    let den: i64 = rng.gen_range(1..=MAX_DENOMINATOR);
    let q = q as i64;
    // [-q/(q+1), 1/(q+1)] scaled by den(q+1).
    let scale = den * (q + 1);
    let num = rng.gen_range(-q * den..=den);
    rat(num, scale)
}

fn c1_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    let mut total = 0;
    for q in [2u32, 3, 5, 10] {
        let sys = NumerationSystem::new(q).unwrap();
        for _ in 0..1000 {
            let x = random_in_domain(&mut rng, q);
            let d = digits_of(&x, &sys).unwrap();
            if oracle_value(&d, q) != x || value_of(&d, &sys).unwrap() != x {
                mismatches += 1;
            }
            total += 1;
        }
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches over {total} points"))
}

fn c2_reconstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut failures = 0;
    let mut cases = 0;
    for q in [2u32, 3] {
        for _ in 0..200 {
            let s = seq(&mut rng, q, 12, 8);
            let x = oracle_value(&s, q);
            let mut head = Rational::zero();
            for n in 0..=40 {
                if n > 0 {
                    head += weight(q, n) * Rational::from_integer(s.digit_at(n).into());
                }
                let rhs = &head + weight(q, n) * oracle_value(&shift_n(&s, n), q);
                if rhs != x {
                    failures += 1;
                }
                cases += 1;
            }
        }
    }
    outcome(failures == 0, format!("{failures} failures over {cases} (sequence, n) pairs"))
}

fn c3_affine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut failures = 0;
    for q in [2u32, 3, 10] {
        let qr = Rational::from_integer(BigInt::from(q));
        for _ in 0..500 {
            let s = seq(&mut rng, q, 14, 8);
            let m = rng.gen_range(1..=20);
            let x = oracle_value(&s, q);
            let lhs = oracle_value(&gen_shift(&s, m), q);
            let head: Vec<u32> = (1..=m).map(|k| s.digit_at(k)).collect();
            let truncated = oracle_value(&DigitSeq::new(head, vec![0]).unwrap(), q);
            let im = Rational::from_integer(s.digit_at(m).into());
            let rhs = -&qr * &x - im * weight(q, m) + (&qr + Rational::one()) * truncated;
            if lhs != rhs {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{failures} failures over 1500 cases"))
}

fn c4_composition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut failures = 0;
    for _ in 0..500 {
        let q = rng.gen_range(2..=5);
        let s = seq(&mut rng, q, 16, 8);
        let len = rng.gen_range(1..=8);
        let mut pool: Vec<usize> = (1..=12).collect();
        pool.shuffle(&mut rng);
        let indices = pool[..len].to_vec();
        let out = compose(&s, &ShiftPlan::new(indices.clone()).unwrap());
        let expected: Vec<u32> = (1..).filter(|n| !indices.contains(n)).take(60).map(|n| s.digit_at(n)).collect();
        let got: Vec<u32> = (1..=60).map(|n| out.digit_at(n)).collect();
        if got != expected {
            failures += 1;
        }
    }
    // Raw two-step deletion table.
    let s = DigitSeq::new((0..30).map(|i| i % 7).collect(), vec![1, 2, 3]).unwrap();
    let mut table_failures = 0;
    for n1 in 1..=12 {
        for n2 in 1..=12 {
            let out = gen_shift(&gen_shift(&s, n1), n2);
            let removed = if n1 > n2 { [n2, n1] } else { [n1, n2 + 1] };
            let expected: Vec<u32> = (1..).filter(|n| !removed.contains(n)).take(40).map(|n| s.digit_at(n)).collect();
            if (1..=40).map(|n| out.digit_at(n)).ne(expected) {
                table_failures += 1;
            }
        }
    }
    let ex: IndexSequence = EXAMPLE.parse().unwrap();
    let hats: Vec<usize> = (1..=EXAMPLE_HATS.len()).map(|k| ex.hat_n(k)).collect();
    let hats_ok = hats == EXAMPLE_HATS && (12..200).all(|k| ex.hat_n(k) == 3);
    outcome(
        failures == 0 && table_failures == 0 && hats_ok,
        format!("{failures}/500 plan mismatches, {table_failures}/144 table mismatches, hats {hats:?}"),
    )
}

fn c5_residuals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let sets = [
        params(2, &["1/3", "2/3"]),
        params(2, &["1/2", "1/2"]),
        params(3, &["1/3", "1/3", "1/3"]),
        params(3, &["1/2", "-1/4", "3/4"]),
    ];
    let seqs: Vec<IndexSequence> = ["id", EXAMPLE, "2,1|+0"].iter().map(|s| s.parse().unwrap()).collect();
    let mut worst_ratio = 0.0_f64;
    let mut worst = String::new();
    for p in &sets {
        let bound = 3.0 * TOL * (1.0 + p.max_abs_p());
        for s in &seqs {
            for _ in 0..100 {
                let x = seq(&mut rng, p.q(), 10, 6);
                for k in 1..=8 {
                    let r = residual(p, s, &x, k, TOL).unwrap();
                    if r / bound > worst_ratio {
                        worst_ratio = r / bound;
                        worst = format!("{r:e} (bound {bound:e}) q={} s={s} k={k}", p.q());
                    }
                }
            }
        }
    }
    outcome(worst_ratio <= 1.0, format!("worst residual {worst}"))
}

fn c6_integral() -> Outcome {
    let cases = [
        (params(2, &["1/2", "1/2"]), rat(1, 6)),
        (params(2, &["1/3", "2/3"]), rat(1, 9)),
        (params(3, &["1/3", "1/3", "1/3"]), rat(1, 4)),
    ];
    let id = IndexSequence::identity();
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, target) in &cases {
        let closed = integral_closed_form(p);
        let riemann = integral_riemann(p, &id, 12, TOL).unwrap();
        let gap = (riemann - target.to_f64().unwrap()).abs();
        pass &= closed == *target && gap <= INTEGRAL_TOL;
        parts.push(format!(
            "q={} riemann={riemann:.6} target={} gap={gap:.3e} (sum(beta)/(q-1)={})",
            p.q(),
            negasalem::text::format_rational(target),
            negasalem::text::format_rational(&integral_exact(p)),
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c7_continuity() -> Outcome {
    let p = params(2, &["1/3", "2/3"]);
    let sys = *p.system();
    let id = IndexSequence::identity();
    let points: Vec<DigitSeq> = branch_points(2, 6).into_iter().take(50).collect();
    let mut worst_identity = 0.0_f64;
    let mut disagreements = 0;
    for x0 in &points {
        let lim = one_sided_values(&p, &id, x0, TOL).unwrap();
        worst_identity = worst_identity.max(lim.jump());
        let continuous = continuity_class(&p, &id, x0, TOL).unwrap() == Continuity::Continuous;
        disagreements += usize::from(continuous != id.continuity_condition(x0.preperiod().len()));
    }
    let swapped: IndexSequence = "2,1|+0".parse().unwrap();
    let eps = Rational::new(BigInt::one(), BigInt::from(1u64 << 40));
    let mut witness = None;
    for x0 in branch_points(2, 3) {
        let class = match continuity_class(&p, &swapped, &x0, TOL) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let m = x0.preperiod().len();
        let continuous = class == Continuity::Continuous;
        disagreements += usize::from(continuous != swapped.continuity_condition(m));
        if let Continuity::Jump(j) = class {
            // Confirm with points just either side of x0.
            let x = value_of(&x0, &sys).unwrap();
            let l = eval_h_at(&p, &swapped, &(&x - &eps), TOL).unwrap().value;
            let r = eval_h_at(&p, &swapped, &(&x + &eps), TOL).unwrap().value;
            if j > JUMP_WITNESS && (l - r).abs() > JUMP_WITNESS && witness.is_none() {
                witness = Some((x0.clone(), j));
            }
        }
    }
    let pass = worst_identity <= 2.0 * TOL && witness.is_some() && disagreements == 0;
    outcome(
        pass,
        format!(
            "identity max jump {worst_identity:e} over {} points; witness {:?}; {disagreements} disagreements",
            points.len(),
            witness.map(|(x, j)| format!("{x} jump {j:.6}"))
        ),
    )
}

fn c8_monotonicity() -> Outcome {
    let p = params(2, &["1/3", "2/3"]);
    let id = IndexSequence::identity();
    let grid = monotonicity_report(
        &p,
        &id,
        &ScanOptions {
            grid_size: 10_000,
            scan_rank: 0,
            scan_depth: 0,
            tol: TOL,
        },
    )
    .unwrap();

    let ex: IndexSequence = EXAMPLE.parse().unwrap();
    let scan = monotonicity_report(
        &p,
        &ex,
        &ScanOptions {
            grid_size: 2,
            scan_rank: 6,
            scan_depth: 6,
            tol: TOL,
        },
    )
    .unwrap();
    let monotone_cylinders = scan.cylinder_scan.iter().filter(|c| !c.is_non_monotone()).count();

    // With p_1 = 0 the series stops at the first image digit 1, so h is
    // constant on every cylinder that fixes such a digit.
    let zp = params(3, &["1/2", "0", "1/2"]);
    let sys = *zp.system();
    let mut flat_cylinders = 0;
    let mut worst_spread = 0.0_f64;
    for rank in 1..=3 {
        for index in 0..3usize.pow(rank as u32) {
            let prefix: Vec<u32> = (0..rank).map(|k| (index / 3usize.pow(k as u32) % 3) as u32).collect();
            let zero = prefix
                .iter()
                .enumerate()
                .any(|(k, &d)| if (k + 1) % 2 == 1 { 2 - d == 1 } else { d == 1 });
            if !zero {
                continue;
            }
            flat_cylinders += 1;
            let c = cylinder(&prefix, &sys).unwrap();
            let step = c.width() / Rational::from_integer(BigInt::from(64));
            let values: Vec<f64> = (0..=64)
                .map(|i| {
                    let x = &c.lo + &step * Rational::from_integer(BigInt::from(i));
                    eval_h_at(&zp, &id, &x, TOL).unwrap().value
                })
                .collect();
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            worst_spread = worst_spread.max(hi - lo);
        }
    }
    let pass = grid.increasing_violations == 0 && monotone_cylinders == 0 && worst_spread <= 2.0 * TOL;
    outcome(
        pass,
        format!(
            "{} grid violations; {monotone_cylinders}/{} example cylinders without witness; max spread {worst_spread:e} over {flat_cylinders} zero-weight cylinders",
            grid.increasing_violations,
            scan.cylinder_scan.len()
        ),
    )
}

fn c9_increment() -> Outcome {
    let p = params(2, &["1/3", "2/3"]);
    let sys = *p.system();
    let id = IndexSequence::identity();
    let pf = [1.0 / 3.0, 2.0 / 3.0];
    let mut worst = 0.0_f64;
    let mut count = 0;
    for rank in 1..=6 {
        for index in 0..(1usize << rank) {
            let prefix: Vec<u32> = (0..rank).map(|k| ((index >> k) & 1) as u32).collect();
            let product: f64 = prefix
                .iter()
                .enumerate()
                .map(|(k, &d)| pf[if (k + 1) % 2 == 1 { 1 - d } else { d } as usize])
                .product();
            let c = cylinder(&prefix, &sys).unwrap();
            let inc = eval_h_at(&p, &id, &c.hi, TOL).unwrap().value - eval_h_at(&p, &id, &c.lo, TOL).unwrap().value;
            worst = worst.max((inc - product).abs());
            count += 1;
        }
    }
    outcome(worst <= 2.0 * TOL, format!("max |increment - product| {worst:e} over {count} cylinders"))
}

fn c10_distribution() -> Outcome {
    let p = params(2, &["1/3", "2/3"]);
    let id = IndexSequence::identity();
    let samples = sample_eta(&p, &id, SEED, 100_000).unwrap();
    let d = ks_distance(&samples, |v| {
        cdf_eta(&p, &id, &Rational::from_float(v).unwrap(), TOL).unwrap().value
    });
    let sys = *p.system();
    let lo = sys.dom_inf() - rat(1, 10);
    let step = (sys.dom_sup() + rat(1, 10) - &lo) / Rational::from_integer(BigInt::from(999));
    let values: Vec<f64> = (0..1000)
        .map(|i| {
            let x = &lo + &step * Rational::from_integer(BigInt::from(i));
            cdf_eta(&p, &id, &x, TOL).unwrap().value
        })
        .collect();
    let drops = values.windows(2).filter(|w| w[1] < w[0] - 2.0 * TOL).count();
    let range_ok = values[0] == 0.0 && values[999] == 1.0;
    outcome(
        d <= KS_BOUND && drops == 0 && range_ok,
        format!("KS {d:.5} with n=100000; {drops} decreases on 1000-point grid"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("numeration round trip", 5, c1_round_trip),
        ("reconstruction identity", 5, c2_reconstruction),
        ("shift affine identity", 5, c3_affine),
        ("composition and hat indices", 10, c4_composition),
        ("functional equation residuals", 30, c5_residuals),
        ("integral closed form", 60, c6_integral),
        ("continuity at branch points", 30, c7_continuity),
        ("monotonicity", 60, c8_monotonicity),
        ("cylinder increment", 10, c9_increment),
        ("distribution function", 60, c10_distribution),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let pass = result.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} [{}] {name}: {} ({:.2}s / {limit}s{})",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

