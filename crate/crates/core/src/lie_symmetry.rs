//! Compact symmetry groups: counts on products `G × M` and the `SO(2)`
//! components of the spectral projection on the plane.

use std::f64::consts::PI;

use serde::Serialize;

use crate::numerics::{bessel_j_upto, integrate_panels, Quadrature};
use crate::{Error, Result};

/// Counting function `N^(M)` of the base factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BaseCounts {
    /// Eigenvalues with multiplicity, in any order.
    Steps(Vec<f64>),
    /// `c·λ^β` for `λ ≥ 0`.
    PowerLaw { c: f64, beta: f64 },
}

impl BaseCounts {
    pub fn count(&self, lambda: f64) -> f64 {
        if lambda < 0.0 {
            return 0.0;
        }
        match self {
            BaseCounts::Steps(ev) => ev.iter().filter(|&&e| e <= lambda).count() as f64,
            BaseCounts::PowerLaw { c, beta } => c * lambda.powf(*beta),
        }
    }
}

/// `G × M` with the group's eigenvalue `λ_j^(G)` and dimension `d_j` per irrep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSpectrum {
    group_levels: Vec<(f64, usize)>,
    base: BaseCounts,
}

impl ProductSpectrum {
    pub fn new(group_levels: Vec<(f64, usize)>, base: BaseCounts) -> Result<Self> {
        if group_levels.windows(2).any(|w| !(w[0].0 <= w[1].0)) {
            return Err(Error::InvalidInput("group eigenvalues must be nondecreasing".into()));
        }
        if let Some(&(l, d)) = group_levels.iter().find(|&&(l, d)| d == 0 || !l.is_finite()) {
            return Err(Error::InvalidInput(format!("bad group level ({l}, {d})")));
        }
        match &base {
            BaseCounts::PowerLaw { c, beta } if !(*c > 0.0 && *beta > 0.0) => {
                return Err(Error::InvalidInput(format!("power law needs c, β > 0, got {c}, {beta}")))
            }
            BaseCounts::Steps(ev) if ev.iter().any(|e| !e.is_finite()) => {
                return Err(Error::InvalidInput("base eigenvalues must be finite".into()))
            }
            _ => {}
        }
        Ok(ProductSpectrum { group_levels, base })
    }

    /// The bi-invariant Laplacian on `SU(2)`: irreps of dimension `d` with
    /// eigenvalue `d² - 1`, for `d = 1..=levels`.
    pub fn su2(levels: usize, base: BaseCounts) -> Result<Self> {
        Self::new((1..=levels).map(|d| ((d * d - 1) as f64, d)).collect(), base)
    }

    pub fn group_levels(&self) -> &[(f64, usize)] {
        &self.group_levels
    }

    pub fn base(&self) -> &BaseCounts {
        &self.base
    }
}

/// `N_j(λ) = d_j² N^(M)(λ - λ_j^(G))`.
pub fn product_counts(ps: &ProductSpectrum, j: usize, lambda: f64) -> Result<f64> {
    let &(lj, d) = ps
        .group_levels
        .get(j)
        .ok_or_else(|| Error::InvalidInput(format!("irrep index {j} out of range")))?;
    Ok((d * d) as f64 * ps.base.count(lambda - lj))
}

/// `Σ_j N_j(λ)` over the listed irreps.
pub fn product_total(ps: &ProductSpectrum, lambda: f64) -> f64 {
    ps.group_levels
        .iter()
        .map(|&(lj, d)| (d * d) as f64 * ps.base.count(lambda - lj))
        .sum()
}

/// `J_{j-1}(u), J_j(u), J_{j+1}(u)` for `j ≥ 0`, with `J_{-1} = -J_1`.
fn bessel_triple(j: u32, u: f64) -> (f64, f64, f64) {
    let v = bessel_j_upto(j + 1, u);
    let jm = if j == 0 { -v[1] } else { v[j as usize - 1] };
    (jm, v[j as usize], v[j as usize + 1])
}

/// `∫₀^u J_j(s)² s ds = (u²/2)(J_j(u)² - J_{j-1}(u)J_{j+1}(u))`.
fn lommel(j: u32, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let (jm, j0, jp) = bessel_triple(j, u);
    0.5 * u * u * (j0 * j0 - jm * jp)
}

fn check_so2(r: f64, lambda: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("λ must be finite and ≥ 0, got {lambda}")));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("radius must be finite and ≥ 0, got {r}")));
    }
    Ok(())
}

/// `K_λ^(j)(x, x)` at `|x| = r`: `(1/2πr²) ∫₀^{√λ r} J_j(s)² s ds`.
pub fn so2_component_kernel(j: i64, r: f64, lambda: f64) -> Result<f64> {
    check_so2(r, lambda)?;
    let j = j.unsigned_abs() as u32;
    if lambda == 0.0 {
        return Ok(0.0);
    }
    if r == 0.0 {
        return Ok(if j == 0 { lambda / (4.0 * PI) } else { 0.0 });
    }
    let u = lambda.sqrt() * r;
    let v = if u < 1e-4 {
        // Leading term of the power series, where the closed form cancels.
        let t = (0.5 * u).powi(2 * j as i32) / factorial(j).powi(2);
        t * u * u / (2.0 * j as f64 + 2.0)
    } else {
        lommel(j, u)
    };
    Ok(v / (2.0 * PI * r * r))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Where the radial integral switches from short panels to period-wide ones.
const SO2_SPLIT_U: f64 = 50.0;

/// `(1/R) ∫_{|x| ≤ R} K_λ^(j)(x, x) dx`. Requires `√λ R ≥ 10³` unless `λ = 0`.
pub fn so2_component_mass(j: i64, lambda: f64, r_max: f64) -> Result<f64> {
    check_so2(r_max, lambda)?;
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let umax = lambda.sqrt() * r_max;
    if umax < 1e3 {
        return Err(Error::InvalidInput(format!("need √λ·R ≥ 1000, got {umax}")));
    }
    let j = j.unsigned_abs() as u32;
    // In u = √λ r: (1/R) ∫₀^U (u/2)(J_j² - J_{j-1}J_{j+1}) du.
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let (jm, j0, jp) = bessel_triple(j, u);
        0.5 * u * (j0 * j0 - jm * jp)
    };
    let mut breaks: Vec<f64> = (0..=10).map(|i| SO2_SPLIT_U * i as f64 / 10.0).collect();
    let mut u = SO2_SPLIT_U;
    while u + PI < umax {
        u += PI;
        breaks.push(u);
    }
    breaks.push(umax);
    let q = Quadrature::new(1e-12 * umax, 1e-11, 50 * breaks.len() + 100_000)?;
    Ok(integrate_panels(f, &breaks, &q)? / r_max)
}

/// `√λ/π`, the large-`R` limit of [`so2_component_mass`] obtained from
/// `J_j(s)² - J_{j-1}(s)J_{j+1}(s) ~ 2/(πs)`.
pub fn so2_asymptotic_limit(lambda: f64) -> f64 {
    lambda.sqrt() / PI
}

/// `√λ/2π²`, the value printed for the same limit in the literature.
pub fn so2_printed_limit(lambda: f64) -> f64 {
    lambda.sqrt() / (2.0 * PI * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{bessel_j, integrate};

    #[test]
    fn product_arithmetic() {
        let ps = ProductSpectrum::new(vec![(0.0, 1), (1.0, 2)], BaseCounts::PowerLaw { c: 1.0, beta: 1.0 }).unwrap();
        assert_eq!(product_counts(&ps, 1, 3.0).unwrap(), 8.0);
        assert_eq!(product_counts(&ps, 1, 0.5).unwrap(), 0.0);
        assert_eq!(product_total(&ps, 3.0), 3.0 + 8.0);
        assert!(product_counts(&ps, 2, 1.0).is_err());
    }

    #[test]
    fn product_with_step_base() {
        let ps = ProductSpectrum::su2(3, BaseCounts::Steps(vec![0.0, 1.0, 1.0, 4.0])).unwrap();
        // Levels 0, 3, 8 with d = 1, 2, 3.
        assert_eq!(product_counts(&ps, 0, 1.0).unwrap(), 3.0);
        assert_eq!(product_counts(&ps, 1, 4.0).unwrap(), 4.0 * 3.0);
        assert_eq!(product_counts(&ps, 2, 7.9).unwrap(), 0.0);
    }

    #[test]
    fn product_ratio_tends_to_dimension_ratio() {
        for beta in [0.5, 1.0, 1.5] {
            let ps = ProductSpectrum::su2(4, BaseCounts::PowerLaw { c: 1.0, beta }).unwrap();
            let n0 = product_counts(&ps, 0, 1e6).unwrap();
            let n3 = product_counts(&ps, 3, 1e6).unwrap();
            assert!((n3 / n0 / 16.0 - 1.0).abs() < 1e-3, "β={beta}");
        }
    }

    #[test]
    fn rejects_bad_products() {
        assert!(ProductSpectrum::new(vec![(1.0, 1), (0.0, 1)], BaseCounts::Steps(vec![])).is_err());
        assert!(ProductSpectrum::new(vec![(0.0, 0)], BaseCounts::Steps(vec![])).is_err());
        assert!(ProductSpectrum::new(vec![], BaseCounts::PowerLaw { c: -1.0, beta: 1.0 }).is_err());
    }

    #[test]
    fn lommel_matches_quadrature() {
        for (j, u) in [(0u32, 3.0), (1, 7.5), (5, 20.0), (8, 140.0)] {
            let q = integrate(|s| bessel_j(j, s).powi(2) * s, 0.0, u, &Quadrature::with_tol(1e-12)).unwrap();
            assert!((lommel(j, u) - q).abs() < 1e-9 * q.max(1.0), "j={j} u={u}");
        }
    }

    #[test]
    fn kernel_near_origin_is_euclidean() {
        assert_eq!(so2_component_kernel(0, 1.0, 0.0).unwrap(), 0.0);
        let k = so2_component_kernel(0, 1e-3, 1.0).unwrap();
        assert!((k / (1.0 / (4.0 * PI)) - 1.0).abs() < 1e-2);
        assert!(so2_component_kernel(2, 1e-3, 1.0).unwrap() < 1e-12);
    }

    #[test]
    fn kernel_sum_over_j_is_full_kernel() {
        // J_0² + 2Σ_{j≥1} J_j² = 1 gives Σ_j K^(j) = λ/4π at every r.
        let (r, lambda) = (2.0, 4.0);
        let mut s = so2_component_kernel(0, r, lambda).unwrap();
        for j in 1..60 {
            s += 2.0 * so2_component_kernel(j, r, lambda).unwrap();
        }
        assert!((s - lambda / (4.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn kernel_decays_like_one_over_r() {
        let k = so2_component_kernel(5, 10.0, 4.0).unwrap();
        // Envelope: (1/2πr²)·(√λ r/π) = √λ/(2π² r).
        let env = 4.0f64.sqrt() / (2.0 * PI * PI * 10.0);
        assert!(k > 0.0 && k < 2.0 * env, "{k} {env}");
        assert_eq!(so2_component_kernel(-5, 10.0, 4.0).unwrap(), k);
    }

    #[test]
    fn mass_is_j_independent_and_scales() {
        assert_eq!(so2_component_mass(0, 0.0, 1e4).unwrap(), 0.0);
        let m0 = so2_component_mass(0, 4.0, 1e4).unwrap();
        let m3 = so2_component_mass(3, 4.0, 1e4).unwrap();
        assert!((m0 / m3 - 1.0).abs() < 1e-2, "{m0} {m3}");
        let m1 = so2_component_mass(0, 1.0, 1e4).unwrap();
        assert!((m0 / m1 - 2.0).abs() < 2e-2, "{m0} {m1}");
        assert!((m0 / so2_asymptotic_limit(4.0) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn mass_needs_large_radius() {
        assert!(so2_component_mass(0, 1.0, 10.0).is_err());
    }
}
