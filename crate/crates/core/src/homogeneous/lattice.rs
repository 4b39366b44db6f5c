use std::f64::consts::PI;

use super::Estimate;
use crate::numerics::{integrate_panels, Quadrature, SeededRng};
use crate::{Error, Result};

/// Largest lattice dimension handled.
pub const LATTICE_MAX_DIM: usize = 4;

const MC_SAMPLES: usize = 1_000_000;

/// Spectral mass of the lattice `ℤⁿ`, `n ≤ 4`. See [`lattice_mass_estimate`].
pub fn lattice_mass(n: usize, lambda: f64) -> Result<f64> {
    lattice_mass_estimate(n, lambda, 0).map(|e| e.value)
}

/// Volume of `{ξ ∈ [-½,½]ⁿ : Σ 4 sin²(πξᵢ) ≤ λ}`.
///
/// `n = 1` is closed form, `n = 2, 3` use nested adaptive quadrature with
/// the last coordinate integrated analytically, and `n = 4` uses a seeded
/// Monte Carlo average of the same analytic cap function. `λ` is clamped
/// to the spectrum `[0, 4n]`.
pub fn lattice_mass_estimate(n: usize, lambda: f64, seed: u64) -> Result<Estimate> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    if n > LATTICE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: LATTICE_MAX_DIM,
        });
    }
    let top = 4.0 * n as f64;
    if lambda <= 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    if lambda >= top {
        return Ok(Estimate::exact(1.0));
    }
    match n {
        1 => Ok(Estimate::exact(mass1(lambda))),
        2 | 3 => {
            let tol = 1e-11;
            let v = nested(n, lambda, tol)?;
            Ok(Estimate {
                value: v,
                err_est: tol * v.max(1e-300),
            })
        }
        _ => Ok(monte_carlo4(lambda, seed)),
    }
}

fn mass1(lambda: f64) -> f64 {
    (2.0 / PI) * (lambda.clamp(0.0, 4.0).sqrt() / 2.0).asin()
}

fn nested(n: usize, lambda: f64, rel: f64) -> Result<f64> {
    if lambda <= 0.0 {
        return Ok(0.0);
    }
    let top = 4.0 * n as f64;
    if lambda >= top {
        return Ok(1.0);
    }
    if n == 1 {
        return Ok(mass1(lambda));
    }
    // M_n(λ) = 2 ∫_0^½ M_{n-1}(λ - 4 sin²πξ) dξ, supported where the
    // argument is positive and saturated where it exceeds 4(n-1).
    let edge = |s: f64| (s.clamp(0.0, 1.0)).sqrt().asin() / PI;
    let hi = edge(lambda / 4.0);
    let sat = edge((lambda - 4.0 * (n - 1) as f64) / 4.0);
    let mut breaks = vec![0.0];
    if sat > 0.0 && sat < hi {
        breaks.push(sat);
    }
    breaks.push(hi);
    let q = Quadrature {
        abs_tol: 1e-300,
        rel_tol: rel,
        max_subdivisions: 200_000,
    };
    let inner_rel = rel * 0.1;
    let mut failure = None;
    let v = integrate_panels(
        |x| {
            let s = (PI * x).sin();
            match nested(n - 1, lambda - 4.0 * s * s, inner_rel) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        &breaks,
        &q,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * v)
}

fn monte_carlo4(lambda: f64, seed: u64) -> Estimate {
    let mut rng = SeededRng::new(seed);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..MC_SAMPLES {
        let mut r = lambda / 4.0;
        for _ in 0..3 {
            let t = (PI * rng.uniform_in(0.0, 0.5)).sin();
            r -= t * t;
        }
        // Measure of ξ₄ ∈ [-½, ½] with sin²(πξ₄) ≤ r.
        let cap = 2.0 * (r.clamp(0.0, 1.0)).sqrt().asin() / PI;
        s += cap;
        s2 += cap * cap;
    }
    let n = MC_SAMPLES as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0);
    Estimate {
        value: mean,
        err_est: (var / (n - 1.0)).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homogeneous::euclidean_mass;

    #[test]
    fn one_dimensional_closed_form() {
        assert!((lattice_mass(1, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(lattice_mass(1, 4.0).unwrap(), 1.0);
        assert_eq!(lattice_mass(1, 9.0).unwrap(), 1.0);
        assert_eq!(lattice_mass(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn small_lambda_two_dimensions() {
        // Frozen from a 4000² midpoint-grid volume count.
        let v = lattice_mass(2, 0.01).unwrap();
        assert!((v / 7.958e-4 - 1.0).abs() < 0.01, "{v}");
    }

    #[test]
    fn matches_independent_quadrature() {
        // Frozen from an independent adaptive cubature of the cap function.
        let cases = [
            (2, 1.0, 0.08514947757442631),
            (2, 3.0, 0.3083124074893639),
            (2, 6.0, 0.8152184705676006),
            (3, 1.0, 0.01829483538732704),
            (3, 10.0, 0.9432007844283357),
        ];
        for (n, lambda, want) in cases {
            let v = lattice_mass(n, lambda).unwrap();
            assert!((v - want).abs() < 1e-9, "n={n} λ={lambda}: {v} vs {want}");
        }
    }

    #[test]
    fn half_filling_symmetry() {
        // ξ ↦ ½ - ξ maps sin² to cos², so M(2n) = ½ by symmetry.
        for n in 1..=3 {
            let v = lattice_mass(n, 2.0 * n as f64).unwrap();
            assert!((v - 0.5).abs() < 1e-9, "n={n}: {v}");
        }
        let e = lattice_mass_estimate(4, 8.0, 3).unwrap();
        assert!((e.value - 0.5).abs() < 4.0 * e.err_est, "{e:?}");
    }

    #[test]
    fn weyl_law_at_the_bottom() {
        for n in 1..=3 {
            for lambda in [1e-3, 1e-2] {
                let r = lattice_mass(n, lambda).unwrap() / euclidean_mass(n, lambda);
                assert!((r - 1.0).abs() <= 0.02, "n={n} λ={lambda}: {r}");
            }
        }
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let a = lattice_mass_estimate(4, 5.0, 11).unwrap();
        let b = lattice_mass_estimate(4, 5.0, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.err_est > 0.0 && a.err_est < 1e-3);
    }

    #[test]
    fn too_many_dimensions() {
        assert!(matches!(
            lattice_mass(5, 1.0),
            Err(Error::DimensionTooLarge { n: 5, max: 4 })
        ));
    }
}
