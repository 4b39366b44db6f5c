//! Summation of positive-term series with an explicit remainder bound.

use crate::{Error, Result};

/// Upper limit on the number of terms [`sum_series`] will add.
pub const SERIES_ITERATION_CAP: u64 = 1_000_000_000;

/// Sums `Σ_{k≥0} term(k)`, stopping after the first `K` with
/// `tail_bound(K) < tol`, where `tail_bound(K)` must bound
/// `|Σ_{k>K} term(k)|`. Partial sums are compensated (Kahan) so rounding
/// does not eat into the tolerance on long runs.
pub fn sum_series<T, B>(mut term: T, mut tail_bound: B, tol: f64) -> Result<f64>
where
    T: FnMut(u64) -> f64,
    B: FnMut(u64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("series tolerance must be positive, got {tol}")));
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 0..SERIES_ITERATION_CAP {
        let y = term(k) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if tail_bound(k) < tol {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent(format!(
        "series tail bound stayed above {tol:e} after {SERIES_ITERATION_CAP} terms"
    )))
}

/// Sums `Σ_{k≥0} term(k)` when the remainder can be bracketed:
/// `tail(K) = (lo, hi)` with `lo ≤ Σ_{k>K} term(k) ≤ hi`, or `None` while no
/// bracket is available yet. Stops at the first `K` with `hi - lo < 2·tol`
/// and returns the partial sum plus the bracket midpoint.
pub fn sum_series_bracketed<T, B>(mut term: T, mut tail: B, tol: f64) -> Result<f64>
where
    T: FnMut(u64) -> f64,
    B: FnMut(u64) -> Option<(f64, f64)>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("series tolerance must be positive, got {tol}")));
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 0..SERIES_ITERATION_CAP {
        let y = term(k) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if let Some((lo, hi)) = tail(k) {
            if hi - lo < 2.0 * tol {
                return Ok(sum + 0.5 * (lo + hi));
            }
        }
    }
    Err(Error::NonConvergent(format!(
        "series tail bracket stayed wider than {:e} after {SERIES_ITERATION_CAP} terms",
        2.0 * tol
    )))
}
