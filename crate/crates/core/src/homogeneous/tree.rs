use std::f64::consts::PI;

use crate::numerics::{integrate, Quadrature};
use crate::{Error, Result};

/// Spectrum `[q+1-2√q, q+1+2√q]` of the tree Laplacian.
pub fn tree_spectrum(q: u32) -> (f64, f64) {
    let qf = q as f64;
    (qf + 1.0 - 2.0 * qf.sqrt(), qf + 1.0 + 2.0 * qf.sqrt())
}

/// Plancherel density in the variable `u = t log q ∈ [0, π]`:
/// `4q(q+1) sin²u / (2π((q-1)² + 4q sin²u))`. Its total mass is 1.
pub fn tree_plancherel_density(q: u32, u: f64) -> f64 {
    let qf = q as f64;
    let s2 = u.sin().powi(2);
    4.0 * qf * (qf + 1.0) * s2 / (2.0 * PI * ((qf - 1.0).powi(2) + 4.0 * qf * s2))
}

/// Spectral mass of the homogeneous tree with `q + 1` neighbours per vertex.
///
/// Zero up to the bottom of the spectrum and clamped to 1 above its top.
pub fn tree_mass(q: u32, lambda: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::InvalidInput(format!("tree branching must be >= 2, got {q}")));
    }
    let (lo, hi) = tree_spectrum(q);
    if lambda <= lo {
        return Ok(0.0);
    }
    let qf = q as f64;
    let lambda = lambda.min(hi);
    let u_max = ((qf + 1.0 - lambda) / (2.0 * qf.sqrt())).clamp(-1.0, 1.0).acos();
    let quad = Quadrature {
        abs_tol: 1e-300,
        rel_tol: 1e-12,
        max_subdivisions: 200_000,
    };
    integrate(|u| tree_plancherel_density(q, u), 0.0, u_max, &quad)
}

/// Coefficient `a` of the gap-edge law `M(λ₀ + ε) ≈ a ε^{3/2}`,
/// `a = 2 q^{1/4} (q+1) / (3π (q-1)²)`.
pub fn tree_gap_coefficient(q: u32) -> f64 {
    let qf = q as f64;
    2.0 * qf.powf(0.25) * (qf + 1.0) / (3.0 * PI * (qf - 1.0).powi(2))
}
