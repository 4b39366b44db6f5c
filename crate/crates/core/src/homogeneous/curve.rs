use serde::Serialize;

use super::HomogeneousSpace;
use crate::{Error, Result};

/// Power law `M(λ) ≈ c λ^β` assumed beyond the last grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailModel {
    pub c: f64,
    pub beta: f64,
}

/// Sampled `(λ, M(λ))` values with per-point absolute error estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralMassCurve {
    space_tag: String,
    points: Vec<(f64, f64)>,
    err_est: Vec<f64>,
    tail: Option<TailModel>,
}

impl SpectralMassCurve {
    /// Checks that `λ` is strictly increasing and nonnegative and that the
    /// masses are nonnegative and nondecreasing up to their error estimates.
    pub fn new(
        space_tag: impl Into<String>,
        points: Vec<(f64, f64)>,
        err_est: Vec<f64>,
        tail: Option<TailModel>,
    ) -> Result<Self> {
        if points.len() != err_est.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} error estimates",
                points.len(),
                err_est.len()
            )));
        }
        for (i, &(l, m)) in points.iter().enumerate() {
            let e = err_est[i];
            if !(l >= 0.0 && l.is_finite() && m.is_finite() && e >= 0.0) {
                return Err(Error::InvalidInput(format!("bad curve point ({l}, {m}) ± {e}")));
            }
            if m < -e - 1e-12 {
                return Err(Error::InvalidInput(format!("negative mass {m} at λ = {l}")));
            }
            if i > 0 {
                let (pl, pm) = points[i - 1];
                if !(l > pl) {
                    return Err(Error::InvalidInput(format!(
                        "λ grid not strictly increasing at {pl} -> {l}"
                    )));
                }
                if m < pm - e - err_est[i - 1] - 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "mass decreases from {pm} to {m} at λ = {l}"
                    )));
                }
            }
        }
        if let Some(t) = tail {
            if !(t.c >= 0.0 && t.beta >= 0.0 && t.c.is_finite() && t.beta.is_finite()) {
                return Err(Error::InvalidInput(format!("bad tail model {t:?}")));
            }
        }
        Ok(SpectralMassCurve {
            space_tag: space_tag.into(),
            points,
            err_est,
            tail,
        })
    }

    /// Evaluates `space.mass` on a caller-supplied grid and attaches the
    /// space's tail model.
    pub fn sample(space: &HomogeneousSpace, grid: &[f64]) -> Result<Self> {
        let mut points = Vec::with_capacity(grid.len());
        let mut err = Vec::with_capacity(grid.len());
        for &l in grid {
            let e = space.mass(l)?;
            points.push((l, e.value));
            err.push(e.err_est);
        }
        Self::new(space.tag(), points, err, Some(space.tail_model()?))
    }

    pub fn space_tag(&self) -> &str {
        &self.space_tag
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn err_est(&self) -> &[f64] {
        &self.err_est
    }

    pub fn tail(&self) -> Option<TailModel> {
        self.tail
    }

    pub fn with_tail(mut self, tail: Option<TailModel>) -> Self {
        self.tail = tail;
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        let e = vec![0.0; 2];
        assert!(SpectralMassCurve::new("x", vec![(1.0, 0.0), (1.0, 0.0)], e.clone(), None).is_err());
        assert!(SpectralMassCurve::new("x", vec![(1.0, 1.0), (2.0, 0.5)], e.clone(), None).is_err());
        assert!(SpectralMassCurve::new("x", vec![(1.0, -1.0), (2.0, 0.5)], e.clone(), None).is_err());
        assert!(SpectralMassCurve::new("x", vec![(1.0, 0.0)], e, None).is_err());
    }

    #[test]
    fn samples_a_space() {
        let c = SpectralMassCurve::sample(&HomogeneousSpace::Lattice(1), &[0.0, 2.0, 4.0]).unwrap();
        assert_eq!(c.space_tag(), "lattice(n=1)");
        assert!((c.points()[1].1 - 0.5).abs() < 1e-15);
        assert_eq!(c.tail(), Some(TailModel { c: 1.0, beta: 0.0 }));
    }
}
