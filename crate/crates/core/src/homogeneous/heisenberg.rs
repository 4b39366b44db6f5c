use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use crate::numerics::sum_series_bracketed;
use crate::{Error, Result};

/// Absolute accuracy of [`heisenberg_constant`].
const CONSTANT_TOL: f64 = 1e-10;

static CONSTANTS: Mutex<BTreeMap<usize, f64>> = Mutex::new(BTreeMap::new());

/// The constant `C(n)` in `M(λ) = C(n) λ^{n+1}`:
/// `C(n) = 2/((n+1)(2π)^{n+1}) Σ_k binom(n+k-1, k) / (n+2k)^{n+1}`.
///
/// The summand `f` is decreasing for `k ≥ n²/4`, so past that point the
/// remainder after `K` lies in `[∫_{K+1}^∞ f, ∫_K^∞ f]`; both integrals are
/// rational in `K`. Summation stops once the bracket is narrower than the
/// target accuracy. Results are memoised per `n`.
pub fn heisenberg_constant(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    if let Some(&c) = CONSTANTS.lock().unwrap().get(&n) {
        return Ok(c);
    }
    let nf = n as f64;
    let prefactor = 2.0 / ((nf + 1.0) * (2.0 * PI).powi(n as i32 + 1));
    let term = |k: u64| {
        let k = k as f64;
        // binom(n+k-1, k) = Π_{i=1}^{n-1} (k+i)/i
        let binom: f64 = (1..n).map(|i| (k + i as f64) / i as f64).product();
        binom / (nf + 2.0 * k).powi(n as i32 + 1)
    };
    // With u = n+2k, f = Π_i (u + 2i - n) / (2^{n-1}(n-1)! u^{n+1}) = Σ_m p_m u^{m-n-1}.
    let mut poly = vec![1.0];
    for i in 1..n {
        let b = 2.0 * i as f64 - nf;
        let mut next = vec![0.0; poly.len() + 1];
        for (m, &p) in poly.iter().enumerate() {
            next[m] += b * p;
            next[m + 1] += p;
        }
        poly = next;
    }
    let scale = 1.0 / (2f64.powi(n as i32 - 1) * (1..n).map(|i| i as f64).product::<f64>());
    // ∫_a^∞ f dk = (1/2) Σ_m p_m U^{m-n}/(n-m) with U = n + 2a.
    let integral = |a: f64| {
        let u = nf + 2.0 * a;
        0.5 * scale
            * poly
                .iter()
                .enumerate()
                .map(|(m, &p)| p * u.powi(m as i32 - n as i32) / (nf - m as f64))
                .sum::<f64>()
    };
    let monotone_from = (n * n / 4) as u64;
    let tail = |k: u64| (k >= monotone_from).then(|| (integral(k as f64 + 1.0), integral(k as f64)));
    let sum = sum_series_bracketed(term, tail, 0.5 * CONSTANT_TOL / prefactor)?;
    let c = prefactor * sum;
    CONSTANTS.lock().unwrap().insert(n, c);
    Ok(c)
}

/// Spectral mass of the Heisenberg group `ℍ_n` for the sub-Laplacian.
pub fn heisenberg_mass(n: usize, lambda: f64) -> Result<f64> {
    let c = heisenberg_constant(n)?;
    if lambda <= 0.0 {
        return Ok(0.0);
    }
    Ok(c * lambda.powi(n as i32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_two_constants() {
        assert!((heisenberg_constant(1).unwrap() - 1.0 / 32.0).abs() < 1e-10);
        assert!((heisenberg_constant(2).unwrap() - 1.0 / (576.0 * PI)).abs() < 1e-10);
    }

    #[test]
    fn masses() {
        assert!((heisenberg_mass(1, 2.0).unwrap() - 0.125).abs() < 1e-9);
        assert!((heisenberg_mass(2, 1.0).unwrap() - 1.0 / (576.0 * PI)).abs() < 1e-10);
        assert_eq!(heisenberg_mass(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn constants_against_long_direct_sums() {
        // Frozen oracle: 4·10⁷ terms in f64 plus the ∫_K^∞ tail, n = 3 and 4.
        let direct = |n: i32| {
            let term = |k: f64| (1..n).map(|i| (k + i as f64) / i as f64).product::<f64>() / (n as f64 + 2.0 * k).powi(n + 1);
            let big = 4e7;
            let s: f64 = (0..40_000_000u64).rev().map(|k| term(k as f64)).sum();
            // Leading tail ≈ (1/(2^{n-1}(n-1)!)) / (2(n + 2K)).
            let fact: f64 = (1..n).map(|i| i as f64).product();
            let tail = 1.0 / (2f64.powi(n - 1) * fact) / (2.0 * (n as f64 + 2.0 * big));
            2.0 / ((n as f64 + 1.0) * (2.0 * PI).powi(n + 1)) * (s + tail)
        };
        for n in [3usize, 4] {
            let c = heisenberg_constant(n).unwrap();
            assert!((c - direct(n as i32)).abs() < 1e-12, "n = {n}: {c} vs {}", direct(n as i32));
        }
    }
}
