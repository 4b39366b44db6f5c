use std::f64::consts::PI;

use serde::Serialize;

use super::group::FiniteGroup;
use crate::{Error, Result};

/// Largest `λ` accepted by [`torus_d4_counts`]: `4π²·10⁸`.
pub const TORUS_LAMBDA_CAP: f64 = 4.0 * PI * PI * 1e8;

/// How the permutation representation on one kind of `D₄` orbit in `ℤ²` splits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSplit {
    pub representative: (i64, i64),
    pub orbit_size: usize,
    /// Multiplicity of each irrep in the permutation representation.
    pub multiplicities: Vec<usize>,
}

/// Counts after every eigenvalue `4π²|k|²` up to the cutoff.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusLevel {
    pub norm: u64,
    pub lambda: f64,
    pub total: u64,
    pub per_irrep: Vec<u64>,
    /// `#{k ∈ ∂F : |k|² ≤ norm}`.
    pub boundary: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusReport {
    pub lambda_max: f64,
    pub irrep_names: Vec<String>,
    pub irrep_dims: Vec<usize>,
    pub orbit_splits: Vec<OrbitSplit>,
    pub levels: Vec<TorusLevel>,
    /// Number of (level, irrep) pairs with `|N_j - d_j²N/8| > #∂F∩ball`.
    pub violations: usize,
    /// Largest `|N_j - d_j²N/8| / (#∂F∩ball)`.
    pub max_ratio: f64,
    /// Log-log slope of the largest deviation against `λ`, fitted on the
    /// upper envelope over doubling bins (`NaN` with fewer than two bins).
    pub envelope_slope: f64,
}

impl TorusReport {
    /// `max_j |N_j - d_j²N/8|` at each level.
    pub fn max_deviation(&self, level: &TorusLevel) -> f64 {
        level
            .per_irrep
            .iter()
            .zip(&self.irrep_dims)
            .map(|(&nj, &d)| (8.0 * nj as f64 - (d * d) as f64 * level.total as f64).abs() / 8.0)
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
enum OrbitKind {
    Origin,
    Axis,
    Diagonal,
    Generic,
}

const KINDS: [(OrbitKind, (i64, i64)); 4] = [
    (OrbitKind::Origin, (0, 0)),
    (OrbitKind::Axis, (1, 0)),
    (OrbitKind::Diagonal, (1, 1)),
    (OrbitKind::Generic, (2, 1)),
];

/// `r^a s^b` applied to `k`, with `r` the quarter turn and `s` the flip `k₂ ↦ -k₂`.
fn act(g: usize, k: (i64, i64)) -> (i64, i64) {
    let (a, b) = (g % 4, g / 4);
    let mut p = if b == 1 { (k.0, -k.1) } else { k };
    for _ in 0..a {
        p = (-p.1, p.0);
    }
    p
}

fn split_orbit(group: &FiniteGroup, rep: (i64, i64)) -> Result<OrbitSplit> {
    let order = group.order();
    let mut orbit: Vec<(i64, i64)> = (0..order).map(|g| act(g, rep)).collect();
    orbit.sort_unstable();
    orbit.dedup();
    // Permutation character: number of orbit points fixed by g.
    let chi: Vec<f64> = (0..order)
        .map(|g| orbit.iter().filter(|&&p| act(g, p) == p).count() as f64)
        .collect();
    let mut multiplicities = Vec::new();
    for irrep in group.irreps() {
        let ip: f64 = chi.iter().zip(&irrep.character).map(|(a, b)| a * b).sum::<f64>() / order as f64;
        let m = ip.round();
        if (ip - m).abs() > 1e-9 || m < 0.0 {
            return Err(Error::BadCharacterTable(format!(
                "orbit of {rep:?} has non-integral multiplicity {ip} in {}",
                irrep.name
            )));
        }
        multiplicities.push(m as usize);
    }
    Ok(OrbitSplit {
        representative: rep,
        orbit_size: orbit.len(),
        multiplicities,
    })
}

/// Least-squares slope of `log y` against `log x` over the maxima of `y`
/// in doubling bins of `x`, ignoring points with `y = 0`.
fn envelope_slope(points: &[(f64, f64)]) -> f64 {
    let mut bins: Vec<(f64, f64)> = Vec::new();
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) {
            continue;
        }
        let b = x.log2().floor();
        match bins.last_mut() {
            Some(last) if last.0 == b => last.1 = last.1.max(y),
            _ => bins.push((b, y)),
        }
    }
    // Skip the first bins, which hold only a handful of lattice points.
    let fit: Vec<(f64, f64)> = bins
        .iter()
        .skip(bins.len().min(4))
        .map(|&(b, y)| ((b + 0.5) * std::f64::consts::LN_2, y.ln()))
        .collect();
    if fit.len() < 2 {
        return f64::NAN;
    }
    let n = fit.len() as f64;
    let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
    let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `D₄` splitting of the Laplacian on `ℝ²/ℤ²` up to `λ_max`, with the
/// fundamental domain `F = {k₁ ≥ k₂ ≥ 0}` and `∂F = {k₁ = k₂ > 0 or k₂ = 0}`.
pub fn torus_d4_counts(lambda_max: f64) -> Result<TorusReport> {
    if !(lambda_max >= 0.0 && lambda_max <= TORUS_LAMBDA_CAP) {
        return Err(Error::InvalidInput(format!(
            "torus cutoff must lie in [0, {TORUS_LAMBDA_CAP:e}], got {lambda_max}"
        )));
    }
    let group = FiniteGroup::dihedral(4)?;
    let splits = KINDS
        .iter()
        .map(|&(_, rep)| split_orbit(&group, rep))
        .collect::<Result<Vec<_>>>()?;
    // Contribution of one orbit to N_j is d_j·(multiplicity).
    let dims: Vec<usize> = group.irreps().iter().map(|i| i.dim).collect();
    let contrib: Vec<Vec<u64>> = splits
        .iter()
        .map(|s| s.multiplicities.iter().zip(&dims).map(|(&m, &d)| (m * d) as u64).collect())
        .collect();

    let r2 = lambda_max / (4.0 * PI * PI);
    let r2_int = (r2 * (1.0 + 1e-12)).floor() as u64;
    let kmax = (r2_int as f64).sqrt().floor() as u64 + 1;
    let mut events: Vec<(u64, u8)> = Vec::new();
    for k1 in 0..=kmax {
        for k2 in 0..=k1 {
            let norm = k1 * k1 + k2 * k2;
            if norm > r2_int {
                break;
            }
            let kind = match (k1, k2) {
                (0, 0) => OrbitKind::Origin,
                (_, 0) => OrbitKind::Axis,
                _ if k1 == k2 => OrbitKind::Diagonal,
                _ => OrbitKind::Generic,
            };
            events.push((norm, kind as u8));
        }
    }
    events.sort_unstable();

    let nirr = dims.len();
    let mut levels: Vec<TorusLevel> = Vec::new();
    let mut per = vec![0u64; nirr];
    let (mut total, mut boundary) = (0u64, 0u64);
    let mut i = 0;
    while i < events.len() {
        let norm = events[i].0;
        while i < events.len() && events[i].0 == norm {
            let kind = events[i].1 as usize;
            total += splits[kind].orbit_size as u64;
            for (p, c) in per.iter_mut().zip(&contrib[kind]) {
                *p += c;
            }
            // Every non-generic point of F lies on ∂F.
            if kind != OrbitKind::Generic as usize {
                boundary += 1;
            }
            i += 1;
        }
        levels.push(TorusLevel {
            norm,
            lambda: 4.0 * PI * PI * norm as f64,
            total,
            per_irrep: per.clone(),
            boundary,
        });
    }

    let mut violations = 0;
    let mut max_ratio = 0.0f64;
    for l in &levels {
        for (&nj, &d) in l.per_irrep.iter().zip(&dims) {
            let dev8 = (8 * nj as i128 - (d * d) as i128 * l.total as i128).unsigned_abs();
            if dev8 > 8 * l.boundary as u128 {
                violations += 1;
            }
            max_ratio = max_ratio.max(dev8 as f64 / (8.0 * l.boundary as f64));
        }
    }
    let mut report = TorusReport {
        lambda_max,
        irrep_names: group.irreps().iter().map(|i| i.name.clone()).collect(),
        irrep_dims: dims,
        orbit_splits: splits,
        levels,
        violations,
        max_ratio,
        envelope_slope: f64::NAN,
    };
    let pts: Vec<(f64, f64)> = report.levels.iter().map(|l| (l.lambda, report.max_deviation(l))).collect();
    report.envelope_slope = envelope_slope(&pts);
    Ok(report)
}
