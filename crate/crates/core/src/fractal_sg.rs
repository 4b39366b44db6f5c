//! Graph approximations `Γ_m` of the Sierpinski gasket, their `D₃`
//! splitting, Weyl ratios and spectral decimation.
//!
//! A vertex of `Γ_m` is stored by integer barycentric coordinates
//! `(a, b, c)` with `a + b + c = 2^m`; the corners are `2^m` times the unit
//! vectors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

pub use crate::domains::BoundaryCondition;
use crate::graph_symmetry::{
    build_laplacian, isotypic_counts_with, FiniteGroup, FundamentalDomain, GroupAction, IsotypicCount,
    SymmetricSystem, WeightedGraph,
};
use crate::numerics::{sym_eig, EigenDecomposition};
use crate::{Error, Result};

/// Largest level [`build_sg`] accepts; `Γ₇` has 3282 vertices.
pub const SG_MAX_LEVEL: usize = 7;

/// `log 3 / log 5`.
pub fn sg_alpha() -> f64 {
    3f64.ln() / 5f64.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SGGraph {
    level: usize,
    bc: BoundaryCondition,
    coords: Vec<[u32; 3]>,
    edges: Vec<(usize, usize)>,
    corners: [usize; 3],
}

/// `Γ_m` as a union of three half-size copies of `Γ_{m-1}`.
pub fn build_sg(m: usize, bc: BoundaryCondition) -> Result<SGGraph> {
    if m > SG_MAX_LEVEL {
        return Err(Error::LevelTooLarge { m, max: SG_MAX_LEVEL });
    }
    let mut pts: Vec<[u32; 3]> = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut edges: Vec<([u32; 3], [u32; 3])> = vec![(pts[0], pts[1]), (pts[1], pts[2]), (pts[0], pts[2])];
    for level in 1..=m {
        let half = 1u32 << (level - 1);
        let shift = |p: [u32; 3], i: usize| {
            let mut q = p;
            q[i] += half;
            q
        };
        let mut next_pts = BTreeSet::new();
        let mut next_edges = BTreeSet::new();
        for i in 0..3 {
            next_pts.extend(pts.iter().map(|&p| shift(p, i)));
            for &(p, q) in &edges {
                let (a, b) = (shift(p, i), shift(q, i));
                next_edges.insert(if a < b { (a, b) } else { (b, a) });
            }
        }
        pts = next_pts.into_iter().collect();
        edges = next_edges.into_iter().collect();
    }
    let index: HashMap<[u32; 3], usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let side = 1u32 << m;
    let corner = |i: usize| {
        let mut p = [0; 3];
        p[i] = side;
        index[&p]
    };
    Ok(SGGraph {
        level: m,
        bc,
        edges: edges.iter().map(|(p, q)| (index[p], index[q])).collect(),
        corners: [corner(0), corner(1), corner(2)],
        coords: pts,
    })
}

impl SGGraph {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn coords(&self) -> &[[u32; 3]] {
        &self.coords
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn corners(&self) -> [usize; 3] {
        self.corners
    }

    pub fn is_corner(&self, v: usize) -> bool {
        self.corners.contains(&v)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Vertices carrying a degree of freedom: all of them for Neumann,
    /// the non-corner ones for Dirichlet.
    pub fn operator_vertices(&self) -> Vec<usize> {
        match self.bc {
            BoundaryCondition::Neumann => (0..self.vertex_count()).collect(),
            BoundaryCondition::Dirichlet => (0..self.vertex_count()).filter(|&v| !self.is_corner(v)).collect(),
        }
    }

    /// The operator as a weighted graph with unit conductances and
    /// counting measure. Under Dirichlet conditions each edge to a corner
    /// becomes a unit killing term.
    pub fn weighted_graph(&self) -> Result<WeightedGraph> {
        let ops = self.operator_vertices();
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in ops.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        let mut kappa = vec![0.0; ops.len()];
        for &(u, v) in &self.edges {
            match (pos[u], pos[v]) {
                (usize::MAX, usize::MAX) => {}
                (usize::MAX, b) => kappa[b] += 1.0,
                (a, usize::MAX) => kappa[a] += 1.0,
                (a, b) => edges.push((a, b, 1.0)),
            }
        }
        let g = WeightedGraph::new(vec![1.0; ops.len()], edges)?;
        match self.bc {
            BoundaryCondition::Neumann => Ok(g),
            BoundaryCondition::Dirichlet => g.with_killing(kappa),
        }
    }

    /// `D₃` on the operator vertices: `r` cycles the barycentric
    /// coordinates, `s` swaps the last two.
    pub fn d3_action(&self) -> Result<GroupAction> {
        let ops = self.operator_vertices();
        let index: HashMap<[u32; 3], usize> = ops.iter().enumerate().map(|(i, &v)| (self.coords[v], i)).collect();
        let image = |f: fn([u32; 3]) -> [u32; 3]| -> Vec<usize> {
            ops.iter().map(|&v| index[&f(self.coords[v])]).collect()
        };
        let r = image(|[a, b, c]| [c, a, b]);
        let s = image(|[a, b, c]| [a, c, b]);
        GroupAction::from_generators(FiniteGroup::dihedral(3)?, ops.len(), Some(r), Some(s))
    }

    pub fn symmetric_system(&self) -> Result<SymmetricSystem> {
        SymmetricSystem::new(self.weighted_graph()?, self.d3_action()?)
    }

    /// The chamber `a ≥ b ≥ c` cut out by the perpendicular bisectors,
    /// indexed by operator vertex.
    pub fn fundamental_domain(&self, sys: &SymmetricSystem) -> Result<FundamentalDomain> {
        let f: Vec<usize> = self
            .operator_vertices()
            .iter()
            .enumerate()
            .filter(|&(_, &v)| {
                let [a, b, c] = self.coords[v];
                a >= b && b >= c
            })
            .map(|(i, _)| i)
            .collect();
        FundamentalDomain::new(sys, &f)
    }
}

type SpectrumCache = Mutex<BTreeMap<(usize, bool), Arc<EigenDecomposition>>>;

fn cache() -> &'static SpectrumCache {
    static CACHE: OnceLock<SpectrumCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Eigenvalues and eigenvectors of `-Δ_m`. Results are cached per
/// `(level, boundary condition)` for the life of the process.
pub fn sg_spectrum(g: &SGGraph) -> Result<Arc<EigenDecomposition>> {
    let key = (g.level, g.bc == BoundaryCondition::Dirichlet);
    // Held across the solve so concurrent callers wait instead of repeating it.
    let mut map = cache().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(e) = map.get(&key) {
        return Ok(Arc::clone(e));
    }
    let eig = Arc::new(sym_eig(&build_laplacian(&g.weighted_graph()?))?);
    map.insert(key, Arc::clone(&eig));
    Ok(eig)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SgSplitting {
    pub level: usize,
    pub bc: BoundaryCondition,
    pub counts: IsotypicCount,
    /// Index of the 2-dimensional irrep in `counts.irreps`.
    pub two_dim: usize,
    /// `#∂F` for the chamber `a ≥ b ≥ c`.
    pub boundary_size: usize,
    /// Eigenvalues sorted into consecutive triples, ties broken to complete
    /// triples of the form (E, E, 1-dim) where possible; the number of
    /// 2-dimensional members in each complete triple.
    pub triples: Vec<u8>,
    /// `max_λ |N_E(λ) - 2N(λ)/3|` over eigenvalue levels.
    pub max_dev_two_dim: f64,
    /// `max_λ |N_triv(λ) + N_alt(λ) - N(λ)/3|` over eigenvalue levels.
    pub max_dev_one_dim: f64,
}

impl SgSplitting {
    pub fn good_triples(&self) -> usize {
        self.triples.iter().filter(|&&e| e == 2).count()
    }
}

/// `D₃` isotypic counts on `Γ_m`.
pub fn sg_splitting(m: usize, bc: BoundaryCondition) -> Result<SgSplitting> {
    let g = build_sg(m, bc)?;
    let sys = g.symmetric_system()?;
    let eig = sg_spectrum(&g)?;
    let counts = isotypic_counts_with(sys.action(), &eig)?;
    let fd = g.fundamental_domain(&sys)?;
    let two_dim = counts
        .irreps
        .iter()
        .position(|i| i.dim == 2)
        .ok_or_else(|| Error::BadCharacterTable("D3 table without a 2-dimensional irrep".into()))?;

    // Greedy sort within each degenerate level toward (E, E, 1-dim) triples.
    let mut labels: Vec<bool> = Vec::with_capacity(counts.dimension());
    for level in &counts.levels {
        let mut e = level.per_irrep[two_dim];
        let mut one = level.multiplicity - e;
        while e + one > 0 {
            let start = labels.len() - labels.len() % 3;
            let have_e = labels[start..].iter().filter(|&&x| x).count();
            let have_one = labels.len() - start - have_e;
            let want_e = have_e < 2 && e > 0;
            let want_one = have_one < 1 && one > 0;
            let take_e = want_e || (!want_one && e > 0);
            labels.push(take_e);
            if take_e {
                e -= 1;
            } else {
                one -= 1;
            }
        }
    }
    let triples = labels
        .chunks_exact(3)
        .map(|c| c.iter().filter(|&&x| x).count() as u8)
        .collect();

    let (mut dev2, mut dev1) = (0.0f64, 0.0f64);
    let (mut n, mut ne) = (0usize, 0usize);
    for level in &counts.levels {
        n += level.multiplicity;
        ne += level.per_irrep[two_dim];
        dev2 = dev2.max((ne as f64 - 2.0 * n as f64 / 3.0).abs());
        dev1 = dev1.max(((n - ne) as f64 - n as f64 / 3.0).abs());
    }
    Ok(SgSplitting {
        level: m,
        bc,
        counts,
        two_dim,
        boundary_size: fd.boundary_size(),
        triples,
        max_dev_two_dim: dev2,
        max_dev_one_dim: dev1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylPoint {
    /// Renormalised eigenvalue `(3/2)·5^m·λ_m`.
    pub lambda: f64,
    pub count: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylRatioCurve {
    pub level: usize,
    pub bc: BoundaryCondition,
    pub alpha: f64,
    pub scale: f64,
    /// One point per distinct positive eigenvalue, `N` counted with it.
    pub points: Vec<WeylPoint>,
}

impl WeylRatioCurve {
    /// `r(λ) = N(λ)/λ^α`, with `N` right-continuous; 0 below the spectrum.
    pub fn ratio_at(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        self.count_at(lambda) as f64 / lambda.powf(self.alpha)
    }

    pub fn count_at(&self, lambda: f64) -> usize {
        let i = self.points.partition_point(|p| p.lambda <= lambda * (1.0 + 1e-12));
        if i == 0 {
            // Only the zero mode (Neumann) can lie below the first point.
            match self.bc {
                BoundaryCondition::Neumann if lambda >= 0.0 => 1,
                _ => 0,
            }
        } else {
            self.points[i - 1].count
        }
    }

    /// Smallest and largest ratio at the points with `lo ≤ λ ≤ hi`.
    pub fn band(&self, lo: f64, hi: f64) -> (f64, f64) {
        self.points
            .iter()
            .filter(|p| p.lambda >= lo && p.lambda <= hi)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.ratio), b.max(p.ratio)))
    }
}

impl WeylRatioCurve {
    /// `[5^k, λ_max]` covering the top `periods` log-5 periods of the spectrum.
    pub fn top_periods(&self, periods: u32) -> (f64, f64) {
        let top = self.points.last().map_or(1.0, |p| p.lambda);
        let k = top.ln() / 5f64.ln();
        (5f64.powf(k.floor() - periods as f64 + 1.0), top)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicityReport {
    pub coarse_level: usize,
    pub fine_level: usize,
    pub window: (f64, f64),
    pub samples: usize,
    /// `max |r_fine(5λ)/r_coarse(λ) - 1|` over the sampled phases.
    pub max_rel_dev: f64,
    pub worst_lambda: f64,
}

/// Compares `r(5λ)` on the finer level with `r(λ)` on the coarser one at
/// the geometric midpoints of the coarse spectral gaps in `[lo, hi]`,
/// where both step functions are flat.
pub fn sg_weyl_periodicity(coarse: &WeylRatioCurve, fine: &WeylRatioCurve, lo: f64, hi: f64) -> PeriodicityReport {
    let mut samples = 0;
    let (mut max_rel_dev, mut worst_lambda) = (0.0f64, f64::NAN);
    for w in coarse.points.windows(2) {
        let g = (w[0].lambda * w[1].lambda).sqrt();
        if g < lo || g > hi {
            continue;
        }
        samples += 1;
        let d = (fine.ratio_at(5.0 * g) / coarse.ratio_at(g) - 1.0).abs();
        if !(d <= max_rel_dev) {
            max_rel_dev = d;
            worst_lambda = g;
        }
    }
    PeriodicityReport {
        coarse_level: coarse.level,
        fine_level: fine.level,
        window: (lo, hi),
        samples,
        max_rel_dev,
        worst_lambda,
    }
}

/// `N(λ)/λ^α` along the renormalised spectrum of `Γ_m`.
pub fn sg_weyl_ratio(m: usize, bc: BoundaryCondition) -> Result<WeylRatioCurve> {
    let g = build_sg(m, bc)?;
    let eig = sg_spectrum(&g)?;
    let scale = 1.5 * 5f64.powi(m as i32);
    let alpha = sg_alpha();
    let mut points = Vec::new();
    for c in eig.clusters() {
        let mean = eig.eigenvalues()[c.clone()].iter().sum::<f64>() / c.len() as f64;
        if mean <= eig.cluster_tol() {
            continue;
        }
        let lambda = scale * mean;
        points.push(WeylPoint {
            lambda,
            count: c.end,
            ratio: c.end as f64 / lambda.powf(alpha),
        });
    }
    Ok(WeylRatioCurve {
        level: m,
        bc,
        alpha,
        scale,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecimationReport {
    pub level: usize,
    /// Fraction of `Γ_m` eigenvalues (with multiplicity) that equal
    /// `ν(5 - ν)` for some eigenvalue `ν` of `Γ_{m+1}`.
    pub match_fraction: f64,
    /// Distinct `Γ_m` eigenvalues without a preimage.
    pub unmatched: Vec<f64>,
    /// Distinct `Γ_{m+1}` eigenvalues whose image is not in the `Γ_m` spectrum.
    pub exceptional: Vec<f64>,
    pub tol: f64,
}

/// Compares the Dirichlet spectrum of `Γ_m` with the image of that of
/// `Γ_{m+1}` under `ν ↦ ν(5 - ν)`.
pub fn sg_decimation_check(m: usize) -> Result<DecimationReport> {
    let bc = BoundaryCondition::Dirichlet;
    if m > 6 {
        return Err(Error::LevelTooLarge { m, max: 6 });
    }
    let coarse = sg_spectrum(&build_sg(m, bc)?)?;
    let fine = sg_spectrum(&build_sg(m + 1, bc)?)?;
    let tol = 1e-7;
    let distinct = |e: &EigenDecomposition| -> Vec<f64> {
        e.clusters()
            .into_iter()
            .map(|c| e.eigenvalues()[c.clone()].iter().sum::<f64>() / c.len() as f64)
            .collect()
    };
    let fine_vals = distinct(&fine);
    let coarse_vals = distinct(&coarse);
    let images: Vec<f64> = fine_vals.iter().map(|&v| v * (5.0 - v)).collect();
    let near = |xs: &[f64], y: f64| xs.iter().any(|&x| (x - y).abs() <= tol * (1.0 + y.abs()));
    let mut matched = 0usize;
    let mut unmatched = Vec::new();
    for c in coarse.clusters() {
        let v = coarse.eigenvalues()[c.clone()].iter().sum::<f64>() / c.len() as f64;
        if near(&images, v) {
            matched += c.len();
        } else {
            unmatched.push(v);
        }
    }
    let exceptional = fine_vals
        .iter()
        .zip(&images)
        .filter(|&(_, &img)| !near(&coarse_vals, img))
        .map(|(&v, _)| v)
        .collect();
    Ok(DecimationReport {
        level: m,
        match_fraction: if coarse.n() == 0 { 1.0 } else { matched as f64 / coarse.n() as f64 },
        unmatched,
        exceptional,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundaryCondition::{Dirichlet, Neumann};

    #[test]
    fn vertex_and_edge_counts() {
        for m in 0..=5 {
            let g = build_sg(m, Neumann).unwrap();
            assert_eq!(g.vertex_count(), (3usize.pow(m as u32 + 1) + 3) / 2);
            assert_eq!(g.edge_count(), 3usize.pow(m as u32 + 1));
            let deg = g.degrees();
            for v in 0..g.vertex_count() {
                assert_eq!(deg[v], if g.is_corner(v) { 2 } else { 4 }, "m={m}");
            }
        }
        assert!(matches!(build_sg(8, Neumann), Err(Error::LevelTooLarge { .. })));
    }

    #[test]
    fn small_spectra() {
        let e0 = sg_spectrum(&build_sg(0, Neumann).unwrap()).unwrap();
        assert!((e0.eigenvalues()[0]).abs() < 1e-12);
        assert!((e0.eigenvalues()[1] - 3.0).abs() < 1e-12 && (e0.eigenvalues()[2] - 3.0).abs() < 1e-12);
        // Γ₁ Dirichlet: 4I - A on the inner triangle, eigenvalues 2, 5, 5.
        let e1 = sg_spectrum(&build_sg(1, Dirichlet).unwrap()).unwrap();
        let want = [2.0, 5.0, 5.0];
        for (a, b) in e1.eigenvalues().iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let e2 = sg_spectrum(&build_sg(2, Neumann).unwrap()).unwrap();
        assert_eq!(e2.n(), 15);
        assert!(e2.eigenvalues()[0].abs() < 1e-12 && e2.eigenvalues()[1] > 1e-3);
    }

    #[test]
    fn d3_commutes_with_laplacian() {
        for bc in [Dirichlet, Neumann] {
            let g = build_sg(3, bc).unwrap();
            let a = build_laplacian(&g.weighted_graph().unwrap());
            let act = g.d3_action().unwrap();
            for e in 0..6 {
                let r = act.rho(e);
                let d = a.mul(&r).max_abs_diff(&r.mul(&a));
                assert!(d <= 1e-10 * a.frobenius_norm());
            }
        }
    }

    #[test]
    fn k3_splitting() {
        let s = sg_splitting(0, Neumann).unwrap();
        assert_eq!(s.counts.counts(10.0), vec![1, 0, 2]);
    }

    #[test]
    fn splitting_small_levels() {
        for m in 1..=4 {
            for bc in [Dirichlet, Neumann] {
                let s = sg_splitting(m, bc).unwrap();
                let n = s.counts.dimension();
                assert_eq!(s.counts.counts(1e9).iter().sum::<usize>(), n);
                assert!(s.max_dev_one_dim <= 6.0 * s.boundary_size as f64);
                assert!(s.boundary_size > 0);
            }
        }
    }

    #[test]
    fn chamber_boundary_sizes() {
        // Brute-force count over the six chambers, m = 1..=5.
        let want = [(Dirichlet, [1, 3, 8, 12, 15]), (Neumann, [2, 4, 9, 13, 16])];
        for (bc, sizes) in want {
            for (m, &b) in (1..=5).zip(&sizes) {
                let g = build_sg(m, bc).unwrap();
                let sys = g.symmetric_system().unwrap();
                assert_eq!(g.fundamental_domain(&sys).unwrap().boundary_size(), b, "{bc:?} m={m}");
            }
        }
    }

    #[test]
    fn decimation_small_levels() {
        for m in 2..=3 {
            let r = sg_decimation_check(m).unwrap();
            assert!(r.match_fraction >= 0.9, "{r:?}");
        }
    }

    #[test]
    fn weyl_ratio_band_and_periodicity_at_level_five() {
        let w4 = sg_weyl_ratio(4, Neumann).unwrap();
        let w5 = sg_weyl_ratio(5, Neumann).unwrap();
        let (lo, hi) = w5.top_periods(2);
        let (a, b) = w5.band(lo, hi);
        assert!(a > 0.1 && b < 0.35, "{a} {b}");
        // Relative deviations shrink like 1/N, so use the top period only.
        let (lo, hi) = w4.top_periods(1);
        let p = sg_weyl_periodicity(&w4, &w5, lo, hi);
        assert!(p.samples > 10);
        assert!(p.max_rel_dev < 0.05, "{p:?}");
    }

    #[test]
    fn weyl_ratio_below_spectrum_is_zero() {
        let w = sg_weyl_ratio(3, Dirichlet).unwrap();
        assert_eq!(w.ratio_at(0.5 * w.points[0].lambda), 0.0);
        assert_eq!(w.count_at(0.5 * w.points[0].lambda), 0);
    }
}
