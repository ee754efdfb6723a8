use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::indexseq::IndexSequence;
use crate::Rational;

use super::{check_tol, SalemParams};

fn beta_sum(params: &SalemParams) -> Rational {
    let q = params.q();
    let even: Rational = (0..q).map(|i| params.beta_dd(i, 2).clone()).sum();
    let odd: Rational = (0..q).map(|i| params.beta_dd(i, 1).clone()).sum();
    assert_eq!(even, odd, "parity transform must only permute the β_j");
    even
}

/// The closed form `(1/(q+1))·Σ_j β̈_j`.
///
/// Cylinder Riemann sums do not converge to this value; they converge to
/// [`integral_exact`]. The two differ by the factor `(q-1)/(q+1)`.
pub fn integral_closed_form(params: &SalemParams) -> Rational {
    beta_sum(params) / Rational::from_integer(BigInt::from(params.q() + 1))
}

/// `∫ h = Σ_j β_j / (q-1)` over the whole domain.
///
/// The domain has unit length and a uniformly distributed point has i.i.d.
/// uniform digits, so the image digits fed to the Salem series are i.i.d.
/// uniform for any injective `(n_k)`. Splitting on the first image digit
/// gives `I = (1/q)·Σβ_j + (1/q)·Σp_j·I`.
pub fn integral_exact(params: &SalemParams) -> Rational {
    beta_sum(params) / Rational::from_integer(BigInt::from(params.q() - 1))
}

/// Largest number of cylinders summed by [`integral_riemann`].
pub const MAX_RIEMANN_CELLS: u64 = 1 << 24;

/// `Σ_Λ h(rep Λ)·|Λ|` over all rank-`rank` cylinders, using the
/// prefix-plus-zeros representative of each.
pub fn integral_riemann(
    params: &SalemParams,
    s: &IndexSequence,
    rank: usize,
    tol: f64,
) -> Result<f64> {
    check_tol(tol)?;
    let q = u64::from(params.q());
    let cells = u32::try_from(rank)
        .ok()
        .and_then(|r| q.checked_pow(r))
        .filter(|&c| (1..=14).contains(&rank) && c <= MAX_RIEMANN_CELLS)
        .ok_or_else(|| {
            Error::Argument(format!(
                "rank must be in 1..=14 with at most {MAX_RIEMANN_CELLS} cylinders"
            ))
        })?;
    let values: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|index| {
            // digits[0] is the first digit; index is read most significant first.
            let mut digits = vec![0u32; rank];
            let mut rest = index;
            for slot in digits.iter_mut().rev() {
                *slot = (rest % q) as u32;
                rest /= q;
            }
            params
                .sum_series(s, 1, tol, |k| {
                    let n = s.n_at(k);
                    if n <= rank {
                        digits[n - 1]
                    } else {
                        0
                    }
                })
                .value
        })
        .collect();
    let total: f64 = values.iter().sum();
    Ok(total / (q as f64).powi(rank as i32))
}
