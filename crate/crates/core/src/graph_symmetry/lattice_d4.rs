use std::f64::consts::PI;

use serde::Serialize;

use crate::homogeneous::lattice_mass;
use crate::numerics::{integrate_panels, Quadrature, SeededRng};
use crate::{Error, Result};

/// Half-width of the box `[-B, B]²` the frequencies `m` are drawn from.
pub const D4_SAMPLE_BOX: i64 = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct D4MonteCarlo {
    pub lambda: f64,
    pub samples: usize,
    pub mean: f64,
    pub std_err: f64,
    /// `M(λ)` for the square lattice.
    pub full_mass: f64,
    /// `mean / M(λ)`; tends to `1/8`.
    pub ratio: f64,
}

/// `∫_{-T}^{T} cos 2πkξ dξ`.
fn cos_window(k: i64, t: f64) -> f64 {
    if k == 0 {
        2.0 * t
    } else {
        (2.0 * PI * k as f64 * t).sin() / (PI * k as f64)
    }
}

/// `∫_{-T}^{T} cos 2πpξ cos 2πqξ dξ`.
fn cos_pair(p: i64, q: i64, t: f64) -> f64 {
    0.5 * (cos_window(p - q, t) + cos_window(p + q, t))
}

/// Half-height of the slice `{ξ₂ : 4sin²πξ₁ + 4sin²πξ₂ ≤ λ}` of the square.
fn slice(lambda: f64, x1: f64) -> f64 {
    let s = (0.25 * lambda - (PI * x1).sin().powi(2)).clamp(0.0, 1.0);
    s.sqrt().asin() / PI
}

/// The integral over `{4sin²πξ₁ + 4sin²πξ₂ ≤ λ}` of
/// `¼(cos 2πm₁ξ₁ cos 2πm₂ξ₂ + cos 2πm₂ξ₁ cos 2πm₁ξ₂)²`, the
/// trivial-isotypic diagonal for the frequency orbit of `(m₁, m₂)`.
pub fn d4_trivial_integral(lambda: f64, m1: i64, m2: i64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda <= 8.0) {
        return Err(Error::InvalidInput(format!("λ must lie in [0, 8], got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let c = |m: i64, x: f64| (2.0 * PI * m as f64 * x).cos();
    let f = |x: f64| {
        let t = slice(lambda, x);
        if t == 0.0 {
            return 0.0;
        }
        let (a, b) = (c(m1, x), c(m2, x));
        a * a * cos_pair(m2, m2, t) + 2.0 * a * b * cos_pair(m1, m2, t) + b * b * cos_pair(m1, m1, t)
    };
    // Panels a quarter period wide, split at the edge of the support and
    // where the slice saturates.
    let mmax = m1.unsigned_abs().max(m2.unsigned_abs()).max(1) as f64;
    let np = (2.0 * mmax).ceil() as usize;
    let mut breaks: Vec<f64> = (0..=np).map(|i| 0.5 * i as f64 / np as f64).collect();
    for s in [0.25 * lambda, 0.25 * lambda - 1.0] {
        if s > 0.0 && s < 1.0 {
            breaks.push(s.sqrt().asin() / PI);
        }
    }
    breaks.sort_by(f64::total_cmp);
    let q = Quadrature::new(1e-12, 1e-10, 400_000)?;
    // Even in ξ₁: integrate over [0, ½] and double, with the ¼ prefactor.
    Ok(0.5 * integrate_panels(f, &breaks, &q)?)
}

/// Monte Carlo average of [`d4_trivial_integral`] over frequencies with a
/// full eight-element orbit, drawn uniformly from `[-B, B]²`
/// (`B =` [`D4_SAMPLE_BOX`]).
pub fn lattice_d4_trivial_mass(lambda: f64, m_samples: usize, seed: u64) -> Result<D4MonteCarlo> {
    if !(lambda > 0.0 && lambda <= 8.0) {
        return Err(Error::InvalidInput(format!("λ must lie in (0, 8], got {lambda}")));
    }
    if m_samples < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    let mut rng = SeededRng::new(seed);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..m_samples {
        let (m1, m2) = loop {
            let m1 = rng.int_in(-D4_SAMPLE_BOX, D4_SAMPLE_BOX);
            let m2 = rng.int_in(-D4_SAMPLE_BOX, D4_SAMPLE_BOX);
            if m1 != 0 && m2 != 0 && m1.abs() != m2.abs() {
                break (m1, m2);
            }
        };
        let v = d4_trivial_integral(lambda, m1, m2)?;
        sum += v;
        sum2 += v * v;
    }
    let n = m_samples as f64;
    let mean = sum / n;
    let var = ((sum2 - n * mean * mean) / (n - 1.0)).max(0.0);
    let full_mass = lattice_mass(2, lambda)?;
    Ok(D4MonteCarlo {
        lambda,
        samples: m_samples,
        mean,
        std_err: (var / n).sqrt(),
        full_mass,
        ratio: mean / full_mass,
    })
}
