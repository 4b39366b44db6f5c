//! Kernel sums over deck groups: the `N`-fold cover `ℝ/Nℤ → ℝ/ℤ` and
//! the universal cover `ℝ → ℝ/ℤ`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::{Error, Result};

/// Relative slack when testing `(2πk)² ≤ λ`, so that exact eigenvalues
/// such as `λ = (2π)²` are counted despite rounding in `√λ/2π`.
const EIGEN_SLACK: f64 = 1e-12;

/// Residual allowed when rounding the cover sum to an integer.
pub const COVER_ROUNDING_TOL: f64 = 1e-6;

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("λ must be finite and ≥ 0, got {lambda}")));
    }
    Ok(())
}

/// `max{k ≥ 0 : (2πk/n)² ≤ λ}`.
fn top_mode(lambda: f64, n: u64) -> u64 {
    let x = n as f64 * lambda.sqrt() / (2.0 * PI);
    let mut k = x.floor() as u64;
    let fits = |k: u64| (2.0 * PI * k as f64 / n as f64).powi(2) <= lambda * (1.0 + EIGEN_SLACK);
    while fits(k + 1) {
        k += 1;
    }
    while k > 0 && !fits(k) {
        k -= 1;
    }
    k
}

/// Spectral mass of the unit circle: `1 + 2⌊√λ/2π⌋`.
pub fn circle_mass(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok((1 + 2 * top_mode(lambda, 1)) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CircleCover {
    n: u64,
}

impl CircleCover {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("cover needs N ≥ 1 sheets".into()));
        }
        Ok(CircleCover { n })
    }

    pub fn sheets(&self) -> u64 {
        self.n
    }

    /// `M̃(λ) = (1/N)(1 + 2⌊N√λ/2π⌋)` on `ℝ/Nℤ`.
    pub fn cover_mass(&self, lambda: f64) -> Result<f64> {
        check_lambda(lambda)?;
        Ok((1 + 2 * top_mode(lambda, self.n)) as f64 / self.n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverSum {
    /// `K_λ(x, x)` after rounding to the nearest integer.
    pub total: f64,
    /// The `γ = e` term, equal to the cover mass.
    pub identity_term: f64,
    /// `Σ_{γ ≠ e}`, bounded by `N - 1` in absolute value.
    pub remainder: f64,
    /// Distance of the floating-point sum from `total`.
    pub residual: f64,
}

/// `Σ_{γ=0}^{N-1} (1/N) Σ_{|k| ≤ K} e^{2πikγ/N}` with `K = ⌊N√λ/2π⌋`,
/// summed over residues `k mod N` so the cost is `O(N²)` at any `λ`.
pub fn cover_sum_detail(cv: &CircleCover, lambda: f64) -> Result<CoverSum> {
    check_lambda(lambda)?;
    let n = cv.n;
    let kmax = top_mode(lambda, n) as i64;
    let ni = n as i64;
    // Number of k ∈ [-K, K] with k ≡ r (mod N).
    let count = |r: i64| -> i64 {
        let up = |x: i64| (x - r).div_euclid(ni);
        up(kmax) - up(-kmax - 1)
    };
    let counts: Vec<i64> = (0..ni).map(count).collect();
    let mut identity = 0.0;
    let mut remainder = 0.0;
    for g in 0..ni {
        let mut s = 0.0;
        for (r, &c) in counts.iter().enumerate() {
            let phase = ((r as i64 * g) % ni) as f64 / n as f64;
            s += c as f64 * (2.0 * PI * phase).cos();
        }
        if g == 0 {
            identity = s / n as f64;
        } else {
            remainder += s / n as f64;
        }
    }
    let raw = identity + remainder;
    let total = raw.round();
    let residual = (raw - total).abs();
    if residual > COVER_ROUNDING_TOL {
        return Err(Error::NonConvergent(format!(
            "cover sum {raw} is {residual:e} from an integer (N = {n}, λ = {lambda})"
        )));
    }
    Ok(CoverSum {
        total,
        identity_term: identity,
        remainder,
        residual,
    })
}

/// `K_λ(x, x)` on the circle assembled from the `N`-fold cover.
pub fn cover_sum_circle(cv: &CircleCover, lambda: f64) -> Result<f64> {
    Ok(cover_sum_detail(cv, lambda)?.total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineCoverSums {
    pub lambda: f64,
    /// `√λ mod 2π`.
    pub theta: f64,
    /// `1 + 2⌊√λ/2π⌋`, the value of the summed series.
    pub limit: f64,
    /// `S_Γ = √λ/π + Σ_{0<|γ|≤Γ} sin(√λγ)/(πγ)` for `Γ = 0..=gamma_max`.
    pub partial: Vec<f64>,
    /// Cesàro means `(1/(Γ+1)) Σ_{g ≤ Γ} S_g`.
    pub fejer: Vec<f64>,
}

impl LineCoverSums {
    pub fn max_abs_partial(&self) -> f64 {
        self.partial.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// `sup_Γ |S_Γ - limit|`.
    pub fn max_partial_error(&self) -> f64 {
        self.partial.iter().fold(0.0, |m, s| m.max((s - self.limit).abs()))
    }

    /// `dist(√λ, 2πℤ)`.
    pub fn phase_distance(&self) -> f64 {
        self.theta.min(2.0 * PI - self.theta)
    }

    pub fn final_fejer(&self) -> f64 {
        *self.fejer.last().expect("at least the Γ = 0 term")
    }
}

/// Partial and Fejér sums of the kernel series from the cover `ℝ → ℝ/ℤ`.
/// Fails with [`Error::DegeneratePhase`] when `√λ` is within `1e-9` of `2πℤ`.
pub fn line_cover_partial_sums(lambda: f64, gamma_max: usize) -> Result<LineCoverSums> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("λ must be finite and > 0, got {lambda}")));
    }
    let root = lambda.sqrt();
    let theta = root.rem_euclid(2.0 * PI);
    if theta.min(2.0 * PI - theta) < 1e-9 {
        return Err(Error::DegeneratePhase(lambda));
    }
    let limit = circle_mass(lambda)?;
    let mut partial = Vec::with_capacity(gamma_max + 1);
    let mut fejer = Vec::with_capacity(gamma_max + 1);
    let mut s = root / PI;
    let mut cum = 0.0;
    for g in 0..=gamma_max {
        if g > 0 {
            s += 2.0 * (g as f64 * theta).sin() / (PI * g as f64);
        }
        partial.push(s);
        cum += s;
        fejer.push(cum / (g + 1) as f64);
    }
    Ok(LineCoverSums {
        lambda,
        theta,
        limit,
        partial,
        fejer,
    })
}
