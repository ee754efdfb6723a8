//! `h` as a distribution function, and a sampler for the matching
//! random variable.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::indexseq::IndexSequence;
use crate::Rational;

use super::{eval_h_at, to_f64, BoundedValue, SalemParams};

fn require_distribution(params: &SalemParams) -> Result<()> {
    if let Some(i) = params.p.iter().position(|p| p < &Rational::default()) {
        return Err(Error::NotADistribution(format!(
            "p_{i} = {} is negative",
            crate::text::format_rational(&params.p[i])
        )));
    }
    Ok(())
}

/// Distribution function of `η`: `0` below the domain, `1` above it, and
/// `h(x)` inside.
pub fn cdf_eta(
    params: &SalemParams,
    s: &IndexSequence,
    x: &Rational,
    tol: f64,
) -> Result<BoundedValue> {
    require_distribution(params)?;
    let sys = params.system();
    if *x < sys.dom_inf() {
        return Ok(BoundedValue::exact(0.0));
    }
    if *x > sys.dom_sup() {
        return Ok(BoundedValue::exact(1.0));
    }
    eval_h_at(params, s, x, tol)
}

/// Draws `count` values of `η`.
///
/// The `k`-th Salem digit `ξ_k` is i.i.d. with `P(ξ_k = i) = p_i`; it is
/// placed at nega-q-ary position `n_k` after the parity transform (odd
/// positions store `q-1-ξ_k`). Positions outside the range of `(n_k)` hold
/// zero. Values are truncated once further digits fall below `f64`
/// resolution.
pub fn sample_eta(
    params: &SalemParams,
    s: &IndexSequence,
    seed: u64,
    count: usize,
) -> Result<Vec<f64>> {
    require_distribution(params)?;
    let q = params.q();
    let weights: Vec<f64> = params.p.iter().map(to_f64).collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::NotADistribution(e.to_string()))?;
    let depth = (64.0 / f64::from(q).log2()).ceil() as usize + 2;
    let readers: Vec<bool> = (1..=depth).map(|pos| s.index_of(pos).is_some()).collect();
    let radix = -f64::from(q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut digits = vec![0u32; depth];
    Ok((0..count)
        .map(|_| {
            for (slot, (digit, &read)) in digits.iter_mut().zip(&readers).enumerate() {
                *digit = if read {
                    params.image_digit(dist.sample(&mut rng) as u32, slot + 1)
                } else {
                    0
                };
            }
            digits
                .iter()
                .rev()
                .fold(0.0, |acc, &d| (acc + f64::from(d)) / radix)
        })
        .collect())
}

/// Kolmogorov–Smirnov statistic `sup |F_n - F|` of a sample against `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .fold(0.0_f64, |d, (i, &x)| {
            let f = cdf(x);
            d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
}
