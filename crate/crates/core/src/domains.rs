//! Spectral mass by spatial averaging on inhomogeneous spaces: the half-line
//! and disjoint unions of cubes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::numerics::{integrate_panels, Quadrature};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        }
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(BoundaryCondition::Dirichlet),
            "neumann" | "n" => Ok(BoundaryCondition::Neumann),
            _ => Err(Error::InvalidInput(format!("unknown boundary condition '{s}'"))),
        }
    }
}

/// `K_λ(x,x)` on the half-line: the full-line value `√λ/π` plus (Neumann)
/// or minus (Dirichlet) the reflected term `sin(2√λx)/(2πx)`.
///
/// `x = 0` returns the limit `(1 ± 1)√λ/π`.
pub fn halfline_kernel_diag(lambda: f64, x: f64, bc: BoundaryCondition) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let k = lambda.sqrt();
    let reflected = if x == 0.0 {
        k / PI
    } else {
        (2.0 * k * x).sin() / (2.0 * PI * x)
    };
    match bc {
        BoundaryCondition::Neumann => k / PI + reflected,
        BoundaryCondition::Dirichlet => k / PI - reflected,
    }
}

/// `(1/R) ∫_0^R K_λ(x,x) dx`, integrated panel by panel over half periods
/// of the reflected term.
pub fn halfline_mass(lambda: f64, r: f64, bc: BoundaryCondition) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("averaging radius must be positive, got {r}")));
    }
    if lambda <= 0.0 {
        return Ok(0.0);
    }
    let k = lambda.sqrt();
    let half_period = PI / (2.0 * k);
    let panels = ((r / half_period).ceil() as usize).clamp(1, 1_000_000);
    let breaks: Vec<f64> = (0..=panels).map(|i| r * i as f64 / panels as f64).collect();
    let q = Quadrature {
        // The integral is divided by 2πR below; this keeps the mass to ~1e-11.
        abs_tol: 1e-11 * 2.0 * PI * r,
        rel_tol: 1e-12,
        max_subdivisions: 16 * panels + 200_000,
    };
    // Only the reflected part needs quadrature; sin(2kx)/x → 2k at 0.
    let reflected = integrate_panels(
        |x| {
            if x == 0.0 {
                2.0 * k
            } else {
                (2.0 * k * x).sin() / x
            }
        },
        &breaks,
        &q,
    )? / (2.0 * PI * r);
    Ok(match bc {
        BoundaryCondition::Neumann => k / PI + reflected,
        BoundaryCondition::Dirichlet => k / PI - reflected,
    })
}

/// Largest number of lattice points per axis [`cube_counting`] will scan.
pub const CUBE_AXIS_CAP: f64 = 1e4;

/// Number of Laplace eigenvalues `≤ λ` on a cube of side `s` in `ℝⁿ`:
/// lattice points `k` with `(π/s)²|k|² ≤ λ`, `kᵢ ≥ 1` (Dirichlet) or
/// `kᵢ ≥ 0` (Neumann).
pub fn cube_counting(s: f64, n: usize, bc: BoundaryCondition, lambda: f64) -> Result<u64> {
    if !(s > 0.0) || n == 0 {
        return Err(Error::InvalidInput(format!("need s > 0 and n >= 1 (s = {s}, n = {n})")));
    }
    if lambda < 0.0 {
        return Ok(0);
    }
    // |k|² ≤ λ s²/π², with a relative slack so exact boundary points count.
    let bound = lambda * s * s / (PI * PI) * (1.0 + 1e-12);
    if bound.sqrt() > CUBE_AXIS_CAP {
        return Err(Error::InvalidInput(format!(
            "cube count needs {:.0} points per axis, above the cap {CUBE_AXIS_CAP}",
            bound.sqrt()
        )));
    }
    let kmin: u64 = match bc {
        BoundaryCondition::Dirichlet => 1,
        BoundaryCondition::Neumann => 0,
    };
    Ok(count_points(n, bound, kmin))
}

fn isqrt_floor(x: f64) -> u64 {
    if x < 0.0 {
        return 0;
    }
    let mut m = x.sqrt().floor() as u64;
    while ((m + 1) * (m + 1)) as f64 <= x {
        m += 1;
    }
    while m > 0 && (m * m) as f64 > x {
        m -= 1;
    }
    m
}

fn count_points(n: usize, rem: f64, kmin: u64) -> u64 {
    let kmax = isqrt_floor(rem);
    if kmax < kmin {
        return 0;
    }
    if n == 1 {
        return kmax - kmin + 1;
    }
    (kmin..=kmax)
        .map(|k| count_points(n - 1, rem - (k * k) as f64, kmin))
        .sum()
}

/// A countable disjoint union of cubes with side lengths `s_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubeFamily {
    pub sides: Vec<f64>,
    pub bc: BoundaryCondition,
    pub n: usize,
}

impl CubeFamily {
    pub fn new(sides: Vec<f64>, bc: BoundaryCondition, n: usize) -> Result<Self> {
        if sides.is_empty() || n == 0 {
            return Err(Error::InvalidInput("cube family needs n >= 1 and at least one cube".into()));
        }
        if let Some(s) = sides.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidInput(format!("cube side must be positive, got {s}")));
        }
        Ok(CubeFamily { sides, bc, n })
    }

    /// Sides `s_j = j^p` for `j = 1..=count`.
    pub fn power_law(count: usize, p: f64, bc: BoundaryCondition, n: usize) -> Result<Self> {
        Self::new((1..=count).map(|j| (j as f64).powf(p)).collect(), bc, n)
    }
}

/// Running averages `Σ_{j≤J} N_j(λ) / Σ_{j≤J} s_jⁿ` with upper and lower
/// limits estimated over a trailing window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageLimits {
    pub m_plus: f64,
    pub m_minus: f64,
    pub sequence: Vec<f64>,
    /// First index of the window used for `m_plus` / `m_minus`.
    pub window_start: usize,
}

/// Fraction of the sequence, at its end, used to estimate lim sup / lim inf.
pub const TRAILING_WINDOW: f64 = 0.2;

pub fn cube_family_mass(fam: &CubeFamily, lambda: f64, truncations: usize) -> Result<AverageLimits> {
    if truncations == 0 || truncations > fam.sides.len() {
        return Err(Error::InvalidInput(format!(
            "truncation count {truncations} must be in 1..={}",
            fam.sides.len()
        )));
    }
    let mut sequence = Vec::with_capacity(truncations);
    let (mut count, mut volume) = (0u64, 0.0f64);
    for &s in &fam.sides[..truncations] {
        count += cube_counting(s, fam.n, fam.bc, lambda)?;
        volume += s.powi(fam.n as i32);
        sequence.push(count as f64 / volume);
    }
    let window = ((truncations as f64 * TRAILING_WINDOW).ceil() as usize).max(1);
    let window_start = truncations - window;
    let tail = &sequence[window_start..];
    Ok(AverageLimits {
        m_plus: tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        m_minus: tail.iter().cloned().fold(f64::INFINITY, f64::min),
        sequence,
        window_start,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homogeneous::euclidean_mass;
    use BoundaryCondition::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(halfline_kernel_diag(0.0, 1.0, Dirichlet), 0.0);
        let far = halfline_kernel_diag(PI * PI, 1e6, Dirichlet);
        assert!((far - 1.0).abs() < 1e-6);
        let n = halfline_kernel_diag(1.0, 1.0, Neumann);
        assert!((n - (1.0 / PI + 2f64.sin() / (2.0 * PI))).abs() < 1e-15);
        assert_eq!(halfline_kernel_diag(4.0, 0.0, Dirichlet), 0.0);
    }

    #[test]
    fn halfline_average() {
        let d = halfline_mass(4.0, 1e4, Dirichlet).unwrap();
        let n = halfline_mass(4.0, 1e4, Neumann).unwrap();
        assert!((d - 2.0 / PI).abs() < 1e-3);
        assert!((n - 2.0 / PI).abs() < 1e-3);
        assert!((n - d).abs() <= 2e-3);
        assert_eq!(halfline_mass(0.0, 7.0, Neumann).unwrap(), 0.0);
        // Si(4·10⁴) from an independent series/asymptotic evaluation.
        let si = 1.57078826151648;
        assert!(((n - d) - si / (PI * 1e4)).abs() < 1e-10);
    }

    #[test]
    fn cube_counting_examples() {
        assert_eq!(cube_counting(1.0, 1, Dirichlet, PI * PI).unwrap(), 1);
        assert_eq!(cube_counting(1.0, 1, Neumann, 0.0).unwrap(), 1);
        // k₁² + k₂² ≤ 12 with kᵢ ≥ 1: (1,1) (1,2) (2,1) (2,2) (1,3) (3,1).
        assert_eq!(cube_counting(2.0, 2, Dirichlet, 3.0 * PI * PI).unwrap(), 6);
        assert_eq!(cube_counting(1.0, 3, Dirichlet, 0.5).unwrap(), 0);
        assert!(cube_counting(1e6, 2, Neumann, 1e3).is_err());
    }

    #[test]
    fn identical_cubes() {
        let fam = CubeFamily::new(vec![1.0; 50], Neumann, 1).unwrap();
        let a = cube_family_mass(&fam, PI * PI + 1.0, 50).unwrap();
        assert!(a.sequence.iter().all(|&x| x == 2.0));
        assert_eq!((a.m_plus, a.m_minus), (2.0, 2.0));
        assert_eq!(a.window_start, 40);
    }

    #[test]
    fn growing_cubes_follow_weyl() {
        let lambda = 100.0;
        let fam = CubeFamily::power_law(10_000, 0.5, Dirichlet, 2).unwrap();
        let a = cube_family_mass(&fam, lambda, 10_000).unwrap();
        let weyl = euclidean_mass(2, lambda);
        assert!(a.m_minus <= a.m_plus);
        assert!(a.m_plus <= weyl && a.m_minus >= 0.95 * weyl, "{a:?}");
    }

    #[test]
    fn shrinking_cubes_degenerate() {
        let lambda = 50.0;
        let d = CubeFamily::power_law(10_000, -1.0, Dirichlet, 1).unwrap();
        let a = cube_family_mass(&d, lambda, 10_000).unwrap();
        // Only cubes with s > π/√λ carry Dirichlet modes, so beyond them the
        // count is frozen and the average is that count over the harmonic sum.
        let harmonic = |m: usize| (1..=m).map(|j| 1.0 / j as f64).sum::<f64>();
        let frozen = a.sequence[99] * harmonic(100);
        assert!((a.sequence[9_999] * harmonic(10_000) - frozen).abs() < 1e-9);
        assert!(a.m_plus < a.sequence[99]);
        let n = CubeFamily::power_law(10_000, -1.0, Neumann, 1).unwrap();
        let a = cube_family_mass(&n, lambda, 10_000).unwrap();
        assert!(a.m_minus > 500.0 && a.sequence[9_999] > 2.0 * a.sequence[999]);
    }

    #[test]
    fn parse_bc() {
        assert_eq!("Neumann".parse::<BoundaryCondition>().unwrap(), Neumann);
        assert!("robin".parse::<BoundaryCondition>().is_err());
    }
}
