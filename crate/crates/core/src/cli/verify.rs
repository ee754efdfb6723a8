use std::fmt;

use clap::ValueEnum;
use num_traits::{ToPrimitive, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeration::{value_of, Digit, DigitSeq};
use crate::operators::{compose, gen_shift_residual, reconstruction_residual, ShiftPlan};
use crate::salem::{
    branch_points, cdf_eta, continuity_class, integral_closed_form, integral_exact,
    integral_riemann, residual, Continuity,
};
use crate::text::format_rational;
use crate::Rational;

use super::{default_riemann_rank, ks_critical, ks_statistic, scan_grid, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    #[value(name = "theorem1")]
    Equations,
    Continuity,
    Integral,
    Cdf,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: String,
    pub tolerance: String,
    pub status: Status,
}

impl Check {
    fn new(name: &str, measured: String, tolerance: String, pass: bool) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            status: if pass { Status::Pass } else { Status::Fail },
        }
    }

    fn skip(name: &str, why: String) -> Self {
        Self {
            name: name.into(),
            measured: why,
            tolerance: "-".into(),
            status: Status::Skip,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{tag}  {}  measured={}  tol={}", self.name, self.measured, self.tolerance)
    }
}

pub(crate) const RANDOM_SEQUENCES: usize = 200;
pub(crate) const RANDOM_PLANS: usize = 500;
pub(crate) const RANDOM_POINTS: usize = 100;
pub(crate) const MAX_LEVEL: usize = 8;
pub(crate) const BRANCH_RANK: usize = 3;
pub(crate) const KS_SAMPLES: usize = 100_000;
pub(crate) const KS_BOUND: f64 = 0.01;
pub(crate) const CDF_GRID: usize = 1000;
pub(crate) const INTEGRAL_TOL: f64 = 1e-3;

pub(crate) fn random_seq(rng: &mut impl Rng, q: u32, max_pre: usize, max_period: usize) -> DigitSeq {
    let pre = (0..rng.gen_range(0..=max_pre)).map(|_| rng.gen_range(0..q)).collect();
    let period = (0..rng.gen_range(1..=max_period)).map(|_| rng.gen_range(0..q)).collect();
    DigitSeq::new(pre, period).expect("nonempty period")
}

fn rng_for(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    rng
}

pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Identities => identities(cfg)?,
        Suite::Equations => equations(cfg)?,
        Suite::Continuity => continuity(cfg)?,
        Suite::Integral => integral(cfg)?,
        Suite::Cdf => cdf(cfg)?,
        Suite::All => {
            let mut all = identities(cfg)?;
            all.extend(equations(cfg)?);
            all.extend(continuity(cfg)?);
            all.extend(integral(cfg)?);
            if cfg.params.is_distribution() {
                all.extend(cdf(cfg)?);
            } else {
                all.push(Check::skip("cdf", "weights are not a distribution".into()));
            }
            all
        }
    })
}

fn identities(cfg: &RunConfig) -> Result<Vec<Check>> {
    let sys = cfg.system();
    let q = sys.q();
    let depth = cfg.depth.min(40);
    let mut rng = rng_for(cfg, 1);
    let seqs: Vec<DigitSeq> = (0..RANDOM_SEQUENCES).map(|_| random_seq(&mut rng, q, 12, 8)).collect();

    let mut reconstruction = 0usize;
    let mut affine = 0usize;
    for s in &seqs {
        for n in 0..=depth {
            if !reconstruction_residual(s, n, sys)?.is_zero() {
                reconstruction += 1;
            }
        }
        for m in 1..=depth.min(20) {
            if !gen_shift_residual(s, m, sys)?.is_zero() {
                affine += 1;
            }
        }
    }

    let mut composition = 0usize;
    for _ in 0..RANDOM_PLANS {
        let s = random_seq(&mut rng, q, 12, 8);
        let len = rng.gen_range(1..=8);
        let mut pool: Vec<usize> = (1..=12).collect();
        pool.shuffle(&mut rng);
        let indices = pool[..len].to_vec();
        let composed = compose(&s, &ShiftPlan::new(indices.clone())?);
        let survivors: Vec<Digit> = (1..)
            .filter(|n| !indices.contains(n))
            .take(40)
            .map(|n| s.digit_at(n))
            .collect();
        if (1..=40).map(|n| composed.digit_at(n)).ne(survivors) {
            composition += 1;
        }
    }

    Ok(vec![
        Check::new(
            "reconstruction identity",
            format!("{reconstruction} nonzero residuals over {} sequences, n<={depth}", seqs.len()),
            "0 (exact)".into(),
            reconstruction == 0,
        ),
        Check::new(
            "shift affine identity",
            format!("{affine} nonzero residuals, m<={}", depth.min(20)),
            "0 (exact)".into(),
            affine == 0,
        ),
        Check::new(
            "composition vs deletion",
            format!("{composition} mismatches over {RANDOM_PLANS} plans"),
            "0 (exact)".into(),
            composition == 0,
        ),
    ])
}

fn equations(cfg: &RunConfig) -> Result<Vec<Check>> {
    let q = cfg.system().q();
    let mut rng = rng_for(cfg, 2);
    let points: Vec<DigitSeq> = (0..RANDOM_POINTS).map(|_| random_seq(&mut rng, q, 10, 6)).collect();
    let worst = points
        .par_iter()
        .map(|x| {
            (1..=MAX_LEVEL).try_fold(0.0_f64, |acc, k| {
                Ok(acc.max(residual(&cfg.params, &cfg.perm, x, k, cfg.tol)?))
            })
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let bound = 3.0 * cfg.tol * (1.0 + cfg.params.max_abs_p());
    Ok(vec![Check::new(
        "functional equation residual",
        format!("{worst:e} over {RANDOM_POINTS} points, k<={MAX_LEVEL}"),
        format!("{bound:e}"),
        worst <= bound,
    )])
}

fn continuity(cfg: &RunConfig) -> Result<Vec<Check>> {
    let sys = cfg.system();
    let mut disagreements = Vec::new();
    let mut tested = 0usize;
    let mut witness: Option<(DigitSeq, f64)> = None;
    for x0 in branch_points(sys.q(), BRANCH_RANK) {
        let m = x0.preperiod().len();
        let class = match continuity_class(&cfg.params, &cfg.perm, &x0, cfg.tol) {
            Ok(c) => c,
            Err(Error::NotApplicable(_)) => continue,
            Err(e) => return Err(e),
        };
        tested += 1;
        let continuous = class == Continuity::Continuous;
        if continuous != cfg.perm.continuity_condition(m) {
            disagreements.push(x0.clone());
        }
        if let Continuity::Jump(j) = class {
            if witness.as_ref().is_none_or(|(_, best)| j > *best) {
                witness = Some((x0, j));
            }
        }
    }
    let mut checks = vec![Check::new(
        "classifier matches condition",
        match disagreements.first() {
            None => format!("0 disagreements over {tested} branch points, rank<={BRANCH_RANK}"),
            Some(first) => format!(
                "{} disagreements over {tested} branch points, first at {first}",
                disagreements.len()
            ),
        },
        "0".into(),
        disagreements.is_empty(),
    )];
    if let Some((x0, jump)) = witness {
        let x = value_of(&x0, sys)?;
        checks.push(Check::new(
            "jump witness",
            format!("{jump} at {} ({x0})", format_rational(&x)),
            format!("> {:e}", 2.0 * cfg.tol),
            true,
        ));
    }
    Ok(checks)
}

fn integral(cfg: &RunConfig) -> Result<Vec<Check>> {
    let p = &cfg.params;
    let rank = default_riemann_rank(p.q());
    let riemann = integral_riemann(p, &cfg.perm, rank, cfg.tol)?;
    let closed = integral_closed_form(p);
    let exact = integral_exact(p);
    let gap = |target: &Rational| (riemann - target.to_f64().unwrap_or(f64::NAN)).abs();
    let closed_gap = gap(&closed);
    let exact_gap = gap(&exact);
    Ok(vec![
        Check::new(
            "riemann vs sum(beta)/(q+1)",
            format!("|{riemann} - {}| = {closed_gap:e}", format_rational(&closed)),
            format!("{INTEGRAL_TOL:e}"),
            closed_gap <= INTEGRAL_TOL,
        ),
        Check::new(
            "riemann vs sum(beta)/(q-1)",
            format!("|{riemann} - {}| = {exact_gap:e}", format_rational(&exact)),
            format!("{INTEGRAL_TOL:e}"),
            exact_gap <= INTEGRAL_TOL,
        ),
    ])
}

fn cdf(cfg: &RunConfig) -> Result<Vec<Check>> {
    let d = ks_statistic(cfg, KS_SAMPLES)?;
    let grid = scan_grid(cfg.system(), CDF_GRID)?;
    let values = grid
        .par_iter()
        .map(|x| cdf_eta(&cfg.params, &cfg.perm, x, cfg.tol).map(|f| f.value))
        .collect::<Result<Vec<f64>>>()?;
    let drops = values
        .windows(2)
        .filter(|w| w[1] < w[0] - 2.0 * cfg.tol)
        .count();
    Ok(vec![
        Check::new(
            "ks distance",
            format!("{d} with n={KS_SAMPLES}, seed={} (1% critical {})", cfg.seed, ks_critical(KS_SAMPLES)),
            format!("{KS_BOUND}"),
            d <= KS_BOUND,
        ),
        Check::new(
            "cdf monotone",
            format!("{drops} decreases on a {CDF_GRID}-point grid"),
            "0".into(),
            drops == 0,
        ),
    ])
}
