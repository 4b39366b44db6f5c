use serde::Serialize;

use super::action::{GroupAction, SymmetricSystem};
use super::graph::laplacian_spectrum;
use crate::numerics::{EigenDecomposition, Matrix};
use crate::{Error, Result};

/// Largest tolerated distance of an isotypic trace from an integer.
pub const TRACE_ROUNDING_TOL: f64 = 1e-6;

/// `P_j = (d_j/#G) Σ_g χ_j(g) ρ(g)`.
///
/// Fails with `BadCharacterTable` if the projectors of the whole table do
/// not sum to the identity within 1e-8.
pub fn isotypic_projector(action: &GroupAction, j: usize) -> Result<Matrix> {
    isotypic_projector_check(action)?;
    let group = action.group();
    let order = group.order() as f64;
    let irrep = group
        .irreps()
        .get(j)
        .ok_or_else(|| Error::InvalidInput(format!("irrep index {j} out of range")))?;
    let mut p = Matrix::zeros(action.n());
    for g in 0..group.order() {
        let w = irrep.dim as f64 * irrep.character[g] / order;
        for (y, &gy) in action.perm(g).iter().enumerate() {
            p[(gy, y)] += w;
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrepSummary {
    pub name: String,
    pub dim: usize,
    pub copies: usize,
}

impl IrrepSummary {
    /// `Σ d²` over complex constituents.
    pub fn weight(&self) -> usize {
        self.copies * self.dim * self.dim
    }
}

/// One eigenvalue cluster and how its eigenspace splits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralLevel {
    pub lambda: f64,
    pub multiplicity: usize,
    pub per_irrep: Vec<usize>,
}

/// Isotypic counting functions `N_j(λ)` as step functions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotypicCount {
    pub group_name: String,
    pub group_order: usize,
    pub irreps: Vec<IrrepSummary>,
    pub levels: Vec<SpectralLevel>,
    pub cluster_tol: f64,
    /// Largest distance of a cluster trace from its rounded value.
    pub max_residual: f64,
}

impl IsotypicCount {
    fn upto(&self, lambda: f64) -> impl Iterator<Item = &SpectralLevel> {
        let cut = lambda + self.cluster_tol;
        self.levels.iter().take_while(move |l| l.lambda <= cut)
    }

    /// `N(λ)`.
    pub fn total(&self, lambda: f64) -> usize {
        self.upto(lambda).map(|l| l.multiplicity).sum()
    }

    /// `N_j(λ)`.
    pub fn count(&self, j: usize, lambda: f64) -> usize {
        self.upto(lambda).map(|l| l.per_irrep[j]).sum()
    }

    pub fn counts(&self, lambda: f64) -> Vec<usize> {
        let mut c = vec![0; self.irreps.len()];
        for l in self.upto(lambda) {
            for (a, b) in c.iter_mut().zip(&l.per_irrep) {
                *a += b;
            }
        }
        c
    }

    /// `(Σd²)_j / #G · N(λ)`.
    pub fn expected(&self, j: usize, lambda: f64) -> f64 {
        self.irreps[j].weight() as f64 / self.group_order as f64 * self.total(lambda) as f64
    }

    /// `(Σd²)_j · #∂F`, the right side of the boundary bound.
    pub fn bound_rhs(&self, j: usize, boundary_size: usize) -> usize {
        self.irreps[j].weight() * boundary_size
    }

    pub fn dimension(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }
}

/// Isotypic counts from a fresh eigendecomposition.
pub fn isotypic_counts(sys: &SymmetricSystem) -> Result<IsotypicCount> {
    let eig = laplacian_spectrum(sys.graph())?;
    isotypic_counts_with(sys.action(), &eig)
}

/// Splits each eigenvalue cluster of `eig` by the traces of the isotypic
/// projectors on it, rounded to integers.
pub fn isotypic_counts_with(action: &GroupAction, eig: &EigenDecomposition) -> Result<IsotypicCount> {
    let group = action.group();
    let order = group.order();
    if eig.n() != action.n() {
        return Err(Error::InvalidInput("eigendecomposition and action sizes differ".into()));
    }
    // Validates the character table against this action.
    isotypic_projector_check(action)?;
    let irreps = group.irreps();
    let mut levels = Vec::new();
    let mut max_residual = 0.0f64;
    for cluster in eig.clusters() {
        // T_g = Σ_{v ∈ E} <v, ρ(g) v> = Σ_v Σ_y v[g·y] v[y].
        let mut tg = vec![0.0; order];
        for i in cluster.clone() {
            let v = eig.eigenvector(i);
            for (g, t) in tg.iter_mut().enumerate() {
                *t += action.perm(g).iter().zip(v).map(|(&gy, vy)| v[gy] * vy).sum::<f64>();
            }
        }
        let lambda = eig.eigenvalues()[cluster.clone()].iter().sum::<f64>() / cluster.len() as f64;
        let mut per_irrep = Vec::with_capacity(irreps.len());
        for irrep in irreps {
            let tr = irrep.dim as f64 / order as f64
                * irrep.character.iter().zip(&tg).map(|(c, t)| c * t).sum::<f64>();
            let r = tr.round();
            let residual = (tr - r).abs();
            max_residual = max_residual.max(residual);
            if residual > TRACE_ROUNDING_TOL || r < 0.0 {
                return Err(Error::NonIntegerTrace {
                    irrep: irrep.name.clone(),
                    lambda,
                    residual,
                });
            }
            per_irrep.push(r as usize);
        }
        if per_irrep.iter().sum::<usize>() != cluster.len() {
            return Err(Error::NonIntegerTrace {
                irrep: "(all)".into(),
                lambda,
                residual: (per_irrep.iter().sum::<usize>() as f64 - cluster.len() as f64).abs(),
            });
        }
        levels.push(SpectralLevel {
            lambda,
            multiplicity: cluster.len(),
            per_irrep,
        });
    }
    Ok(IsotypicCount {
        group_name: group.name(),
        group_order: order,
        irreps: irreps
            .iter()
            .map(|i| IrrepSummary {
                name: i.name.clone(),
                dim: i.dim,
                copies: i.copies,
            })
            .collect(),
        levels,
        cluster_tol: eig.cluster_tol(),
        max_residual,
    })
}

fn isotypic_projector_check(action: &GroupAction) -> Result<()> {
    // Σ_j d_j χ_j(g) must be #G at e and 0 elsewhere (as seen by the action).
    let group = action.group();
    let order = group.order() as f64;
    let n = action.n();
    let mut dev = 0.0f64;
    let mut coeff = vec![0.0; n * n];
    for g in 0..group.order() {
        let w: f64 = group.irreps().iter().map(|i| i.dim as f64 * i.character[g]).sum::<f64>() / order;
        for (y, &gy) in action.perm(g).iter().enumerate() {
            coeff[gy * n + y] += w;
        }
    }
    for x in 0..n {
        for y in 0..n {
            let want = if x == y { 1.0 } else { 0.0 };
            dev = dev.max((coeff[x * n + y] - want).abs());
        }
    }
    if dev > 1e-8 {
        return Err(Error::BadCharacterTable(format!(
            "projectors sum to the identity only within {dev:e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_symmetry::{FiniteGroup, WeightedGraph};

    fn d3_on_k3() -> SymmetricSystem {
        let act = GroupAction::from_generators(
            FiniteGroup::dihedral(3).unwrap(),
            3,
            Some(vec![1, 2, 0]),
            Some(vec![0, 2, 1]),
        )
        .unwrap();
        SymmetricSystem::new(WeightedGraph::complete(3), act).unwrap()
    }

    fn rank(p: &Matrix) -> usize {
        p.trace().round() as usize
    }

    #[test]
    fn projector_algebra() {
        let sys = d3_on_k3();
        let ps: Vec<Matrix> = (0..3).map(|j| isotypic_projector(sys.action(), j).unwrap()).collect();
        assert_eq!(ps.iter().map(rank).collect::<Vec<_>>(), vec![1, 0, 2]);
        let mut sum = Matrix::zeros(3);
        for (i, p) in ps.iter().enumerate() {
            assert!(p.mul(p).max_abs_diff(p) < 1e-12);
            assert!(p.transpose().max_abs_diff(p) < 1e-12);
            for q in &ps[i + 1..] {
                assert!(p.mul(q).max_abs() < 1e-12);
            }
            sum.add_scaled(p, 1.0);
        }
        assert!(sum.max_abs_diff(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn k3_counts() {
        let c = isotypic_counts(&d3_on_k3()).unwrap();
        assert_eq!(c.counts(10.0), vec![1, 0, 2]);
        assert_eq!(c.counts(1.0), vec![1, 0, 0]);
    }

    #[test]
    fn double_cycle_even_and_odd() {
        let n = 6;
        let swap: Vec<usize> = (0..2 * n).map(|x| (x + n) % (2 * n)).collect();
        let act = GroupAction::from_generators(FiniteGroup::cyclic(2).unwrap(), 2 * n, Some(swap), None).unwrap();
        let sys = SymmetricSystem::new(WeightedGraph::double_cycle(n), act.clone()).unwrap();
        let c = isotypic_counts(&sys).unwrap();
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for l in &c.levels {
            even.extend(std::iter::repeat_n(l.lambda.round() as i64, l.per_irrep[0]));
            odd.extend(std::iter::repeat_n(l.lambda.round() as i64, l.per_irrep[1]));
        }
        assert_eq!(even, vec![0, 1, 1, 3, 3, 4]);
        assert_eq!(odd, vec![2, 3, 3, 5, 5, 6]);
        for j in 0..2 {
            assert_eq!(rank(&isotypic_projector(&act, j).unwrap()), 6);
        }
    }

    #[test]
    fn trivial_group_counts_everything() {
        let g = WeightedGraph::cycle(7);
        let act = GroupAction::trivial_on(FiniteGroup::trivial(), 7);
        let sys = SymmetricSystem::new(g, act).unwrap();
        let c = isotypic_counts(&sys).unwrap();
        for l in [0.0, 1.0, 2.5, 4.0] {
            assert_eq!(c.count(0, l), c.total(l));
        }
    }

    #[test]
    fn broken_symmetry_is_detected() {
        // The reflection of a path with unequal conductances is not a symmetry,
        // so its traces on eigenspaces are not integers.
        let g = WeightedGraph::new(vec![1.0; 3], vec![(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let act = GroupAction::from_generators(FiniteGroup::cyclic(2).unwrap(), 3, Some(vec![2, 1, 0]), None).unwrap();
        let eig = laplacian_spectrum(&g).unwrap();
        assert!(matches!(
            isotypic_counts_with(&act, &eig),
            Err(Error::NonIntegerTrace { .. })
        ));
    }
}
