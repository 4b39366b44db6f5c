use std::f64::consts::PI;

use super::WeylConstant;
use crate::numerics::{integrate_panels, Quadrature};
use crate::{Error, Result};

/// `|Γ((n-1)/2 + it) / Γ(it)|²` in its elementary form:
/// `Π_{j<(n-1)/2} (t² + j²)` for odd `n` and
/// `t tanh(πt) Π_{j<(n-2)/2} (t² + (j+½)²)` for even `n`.
pub fn hyperbolic_density(n: usize, t: f64) -> f64 {
    let t2 = t * t;
    if n % 2 == 1 {
        (0..(n - 1) / 2).map(|j| t2 + (j * j) as f64).product()
    } else {
        let p: f64 = (0..(n - 2) / 2)
            .map(|j| t2 + (j as f64 + 0.5).powi(2))
            .product();
        t * (PI * t).tanh() * p
    }
}

/// `M(λ) = n c_n ∫_0^{√(λ - ρ²)} density(t) dt` with `ρ = (n-1)/2`.
pub fn hyperbolic_mass(n: usize, lambda: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "hyperbolic dimension must be >= 2, got {n}"
        )));
    }
    let rho = (n as f64 - 1.0) / 2.0;
    let excess = lambda - rho * rho;
    if !(excess > 0.0) {
        return Ok(0.0);
    }
    let top = excess.sqrt();
    let q = Quadrature {
        abs_tol: 1e-300,
        rel_tol: 1e-12,
        max_subdivisions: 200_000,
    };
    // tanh(πt) saturates by t ≈ 5; give the kink region its own panel.
    let mut breaks = vec![0.0];
    if n % 2 == 0 && top > 4.0 {
        breaks.push(4.0);
    }
    breaks.push(top);
    let integral = integrate_panels(|t| hyperbolic_density(n, t), &breaks, &q)?;
    Ok(n as f64 * WeylConstant::new(n).c_n * integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_the_spectrum() {
        assert_eq!(hyperbolic_mass(3, 0.5).unwrap(), 0.0);
        assert_eq!(hyperbolic_mass(3, 1.0).unwrap(), 0.0);
        assert_eq!(hyperbolic_mass(2, 0.25).unwrap(), 0.0);
    }

    #[test]
    fn three_dimensional_closed_form() {
        let c3 = WeylConstant::new(3).c_n;
        let v = hyperbolic_mass(3, 2.0).unwrap();
        assert!((v - 1.688686e-2).abs() < 1e-8);
        assert!((v - c3).abs() < 1e-8 * c3);
        for lambda in [1.1, 5.0, 37.5, 100.0] {
            let want = c3 * (lambda - 1.0f64).powf(1.5);
            let got = hyperbolic_mass(3, lambda).unwrap();
            assert!((got / want - 1.0).abs() < 1e-8, "λ={lambda}");
        }
    }

    #[test]
    fn plane_has_small_remainder() {
        let c2 = WeylConstant::new(2).c_n;
        let r = hyperbolic_mass(2, 1e4).unwrap() / (c2 * 1e4);
        assert!((r - 1.0).abs() < 1e-2, "{r}");
    }

    #[test]
    fn five_dimensional_polynomial() {
        // n c_n ∫ t²(t²+1) = n c_n (T⁵/5 + T³/3) with T² = λ - 4.
        let c5 = WeylConstant::new(5).c_n;
        let t: f64 = 3.0;
        let want = 5.0 * c5 * (t.powi(5) / 5.0 + t.powi(3) / 3.0);
        let got = hyperbolic_mass(5, 13.0).unwrap();
        assert!((got / want - 1.0).abs() < 1e-10);
    }

    #[test]
    fn even_density_shape() {
        assert_eq!(hyperbolic_density(2, 0.0), 0.0);
        let t = 10.0;
        assert!((hyperbolic_density(4, t) - t * (t * t + 0.25)).abs() < 1e-9);
    }
}
