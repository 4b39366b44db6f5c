//! Spectral mass functions of homogeneous spaces and their heat transforms.
//!
//! On a homogeneous space `K_λ(x,x)` does not depend on `x`, so the
//! spectral mass `M(λ)` is a single number per `λ`.

mod curve;
mod heat;
mod heisenberg;
mod hyperbolic;
mod lattice;
mod tree;

use serde::Serialize;
use statrs::function::gamma::gamma;

pub use curve::{SpectralMassCurve, TailModel};
pub use heat::{heat_closed_form, heat_transform, spectral_vs_heat_bound, HeatBoundReport};
pub use heisenberg::{heisenberg_constant, heisenberg_mass};
pub use hyperbolic::{hyperbolic_density, hyperbolic_mass};
pub use lattice::{lattice_mass, lattice_mass_estimate, LATTICE_MAX_DIM};
pub use tree::{tree_gap_coefficient, tree_mass, tree_plancherel_density, tree_spectrum};

use crate::{Error, Result};

/// Volume `b_n` of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    std::f64::consts::PI.powf(h) / gamma(h + 1.0)
}

/// The Weyl constant `c_n = b_n / (2π)ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylConstant {
    pub n: usize,
    pub c_n: f64,
}

impl WeylConstant {
    pub fn new(n: usize) -> Self {
        WeylConstant {
            n,
            c_n: unit_ball_volume(n) / (2.0 * std::f64::consts::PI).powi(n as i32),
        }
    }
}

/// A value together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            err_est: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HomogeneousSpace {
    Euclidean(usize),
    Lattice(usize),
    Hyperbolic(usize),
    Heisenberg(usize),
    Tree(u32),
}

impl HomogeneousSpace {
    pub fn validate(&self) -> Result<()> {
        match *self {
            HomogeneousSpace::Tree(q) if q < 2 => {
                Err(Error::InvalidInput(format!("tree branching must be >= 2, got {q}")))
            }
            HomogeneousSpace::Hyperbolic(n) if n < 2 => {
                Err(Error::InvalidInput(format!("hyperbolic dimension must be >= 2, got {n}")))
            }
            HomogeneousSpace::Lattice(n) if n > LATTICE_MAX_DIM => Err(Error::DimensionTooLarge {
                n,
                max: LATTICE_MAX_DIM,
            }),
            HomogeneousSpace::Euclidean(0)
            | HomogeneousSpace::Lattice(0)
            | HomogeneousSpace::Heisenberg(0) => {
                Err(Error::InvalidInput("dimension must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Short descriptor such as `lattice(n=2)`.
    pub fn tag(&self) -> String {
        match *self {
            HomogeneousSpace::Euclidean(n) => format!("euclidean(n={n})"),
            HomogeneousSpace::Lattice(n) => format!("lattice(n={n})"),
            HomogeneousSpace::Hyperbolic(n) => format!("hyperbolic(n={n})"),
            HomogeneousSpace::Heisenberg(n) => format!("heisenberg(n={n})"),
            HomogeneousSpace::Tree(q) => format!("tree(q={q})"),
        }
    }

    /// `M(λ)` with an error estimate.
    pub fn mass(&self, lambda: f64) -> Result<Estimate> {
        self.validate()?;
        match *self {
            HomogeneousSpace::Euclidean(n) => Ok(Estimate::exact(euclidean_mass(n, lambda))),
            HomogeneousSpace::Lattice(n) => lattice_mass_estimate(n, lambda, 0),
            HomogeneousSpace::Hyperbolic(n) => hyperbolic_mass(n, lambda).map(|v| Estimate {
                value: v,
                err_est: 1e-10 * v.abs().max(1.0),
            }),
            HomogeneousSpace::Heisenberg(n) => heisenberg_mass(n, lambda).map(|v| Estimate {
                value: v,
                err_est: 1e-10 * lambda.max(0.0).powi(n as i32 + 1),
            }),
            HomogeneousSpace::Tree(q) => tree_mass(q, lambda).map(|v| Estimate {
                value: v,
                err_est: 1e-12,
            }),
        }
    }

    /// Top of the spectrum, if bounded.
    pub fn spectrum_top(&self) -> Option<f64> {
        match *self {
            HomogeneousSpace::Lattice(n) => Some(4.0 * n as f64),
            HomogeneousSpace::Tree(q) => Some(tree_spectrum(q).1),
            _ => None,
        }
    }

    /// Power law `cλ^β` that `M` follows at large `λ`.
    ///
    /// Exact for Euclidean, Heisenberg and (above the spectrum) the
    /// lattice and tree; leading order only for hyperbolic space.
    pub fn tail_model(&self) -> Result<TailModel> {
        self.validate()?;
        Ok(match *self {
            HomogeneousSpace::Euclidean(n) | HomogeneousSpace::Hyperbolic(n) => TailModel {
                c: WeylConstant::new(n).c_n,
                beta: n as f64 / 2.0,
            },
            HomogeneousSpace::Heisenberg(n) => TailModel {
                c: heisenberg_constant(n)?,
                beta: n as f64 + 1.0,
            },
            HomogeneousSpace::Lattice(_) | HomogeneousSpace::Tree(_) => {
                TailModel { c: 1.0, beta: 0.0 }
            }
        })
    }
}

/// `M(λ) = c_n λ^{n/2}` on `ℝⁿ`.
pub fn euclidean_mass(n: usize, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    WeylConstant::new(n).c_n * lambda.powf(n as f64 / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weyl_constants() {
        assert!((WeylConstant::new(1).c_n - 1.0 / PI).abs() < 1e-15);
        assert!((WeylConstant::new(2).c_n - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((WeylConstant::new(3).c_n - 1.0 / (6.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn euclidean_examples() {
        assert!((euclidean_mass(1, PI * PI) - 1.0).abs() < 1e-14);
        assert!((euclidean_mass(2, 4.0 * PI) - 1.0).abs() < 1e-14);
        assert_eq!(euclidean_mass(3, 0.0), 0.0);
    }

    #[test]
    fn validation() {
        assert!(HomogeneousSpace::Tree(1).validate().is_err());
        assert!(HomogeneousSpace::Hyperbolic(1).validate().is_err());
        assert!(matches!(
            HomogeneousSpace::Lattice(5).validate(),
            Err(Error::DimensionTooLarge { n: 5, max: 4 })
        ));
        assert!(HomogeneousSpace::Euclidean(0).validate().is_err());
        assert!(HomogeneousSpace::Heisenberg(2).validate().is_ok());
    }
}
