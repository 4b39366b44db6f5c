use serde::Serialize;
use statrs::function::gamma::{gamma, gamma_ur};

use super::{HomogeneousSpace, SpectralMassCurve};
use crate::{Error, Result};

/// `H(t) = ∫_0^∞ t e^{-λt} M(λ) dλ`, the diagonal heat kernel.
///
/// The curve is interpolated linearly between grid points (and down to
/// `(0, 0)` below the first one); each piece is integrated in closed form.
/// Beyond the grid the tail model `cλ^β` contributes
/// `c t^{-β} Γ(β+1) Q(β+1, Λt)`.
pub fn heat_transform(curve: &SpectralMassCurve, t: f64) -> Result<f64> {
    let tail = curve.tail().ok_or(Error::MissingTailModel)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("heat time must be positive, got {t}")));
    }
    let pts = curve.points();
    let e = |x: f64| (-x * t).exp();
    let mut total = 0.0;
    let mut prev = (0.0, 0.0);
    let mut start = 0;
    if let Some(&(l0, m0)) = pts.first() {
        if l0 == 0.0 {
            prev = (0.0, m0);
            start = 1;
        }
    }
    for &(b, mb) in &pts[start..] {
        let (a, ma) = prev;
        let slope = (mb - ma) / (b - a);
        let alpha = ma - slope * a;
        // E(a) - E(b) without cancellation.
        let ea = e(a);
        let diff = -ea * (-(b - a) * t).exp_m1();
        total += alpha * diff + slope * ((a * ea - b * e(b)) + diff / t);
        prev = (b, mb);
    }
    let big = prev.0;
    let a = tail.beta + 1.0;
    let q = if big * t > 0.0 { gamma_ur(a, big * t) } else { 1.0 };
    total += tail.c * t.powf(-tail.beta) * gamma(a) * q;
    Ok(total)
}

/// Closed-form heat kernel where one exists: `c_n Γ(n/2+1) t^{-n/2}`
/// on `ℝⁿ`, `C(n) Γ(n+2) t^{-(n+1)}` on `ℍ_n` and `(e^{-2t} I₀(2t))ⁿ` on `ℤⁿ`.
pub fn heat_closed_form(space: &HomogeneousSpace, t: f64) -> Option<f64> {
    match *space {
        HomogeneousSpace::Euclidean(_) | HomogeneousSpace::Heisenberg(_) => {
            let tail = space.tail_model().ok()?;
            Some(tail.c * gamma(tail.beta + 1.0) * t.powf(-tail.beta))
        }
        HomogeneousSpace::Lattice(n) => Some(scaled_i0(2.0 * t).powi(n as i32)),
        _ => None,
    }
}

/// `e^{-x} I₀(x) = (1/2π) ∫ e^{x(cos θ - 1)} dθ` by the periodic trapezoid
/// rule, which is exact to rounding once `N ≳ 9√x`.
fn scaled_i0(x: f64) -> f64 {
    let n = 32 + (10.0 * x.sqrt()).ceil() as usize;
    let step = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|k| (x * ((k as f64 * step).cos() - 1.0)).exp()).sum::<f64>() / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatBoundRow {
    pub lambda: f64,
    pub mass: f64,
    /// `e · H(1/λ)`.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatBoundReport {
    pub rows: Vec<HeatBoundRow>,
    /// Smallest `rhs - mass` over the grid.
    pub min_slack: f64,
    /// Largest `rhs - mass` over the grid.
    pub max_slack: f64,
}

/// Checks `M(λ) ≤ e·H(1/λ)` at every `λ > 0` of the grid.
///
/// `H` is closed form where available and otherwise the heat transform of
/// a curve sampled on a fine internal geometric grid.
pub fn spectral_vs_heat_bound(space: &HomogeneousSpace, grid: &[f64]) -> Result<HeatBoundReport> {
    space.validate()?;
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty λ grid".into()));
    }
    if let Some(&bad) = grid.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidInput(format!("bound needs λ > 0, got {bad}")));
    }
    let curve = if heat_closed_form(space, 1.0).is_some() {
        None
    } else {
        let lo = grid.iter().cloned().fold(f64::INFINITY, f64::min) * 1e-6;
        let hi = match space.spectrum_top() {
            Some(top) => top,
            None => 60.0 * grid.iter().cloned().fold(0.0, f64::max),
        };
        let mut internal = Vec::new();
        let mut l = lo;
        while l < hi {
            internal.push(l);
            l *= 1.005;
        }
        internal.push(hi);
        Some(SpectralMassCurve::sample(space, &internal)?)
    };
    let mut rows = Vec::with_capacity(grid.len());
    let (mut min_slack, mut max_slack) = (f64::INFINITY, f64::NEG_INFINITY);
    for &lambda in grid {
        let t = 1.0 / lambda;
        let h = match &curve {
            Some(c) => heat_transform(c, t)?,
            None => heat_closed_form(space, t).expect("closed form exists"),
        };
        let mass = space.mass(lambda)?.value;
        let rhs = std::f64::consts::E * h;
        if mass > rhs {
            return Err(Error::BoundViolated {
                lambda,
                detail: format!("M = {mass} exceeds e·H(1/λ) = {rhs} on {}", space.tag()),
            });
        }
        min_slack = min_slack.min(rhs - mass);
        max_slack = max_slack.max(rhs - mass);
        rows.push(HeatBoundRow { lambda, mass, rhs });
    }
    Ok(HeatBoundReport {
        rows,
        min_slack,
        max_slack,
    })
}
