use serde::Serialize;

use super::group::FiniteGroup;
use super::graph::WeightedGraph;
use crate::numerics::Matrix;
use crate::{Error, Result};

/// A finite group acting on `0..n` by permutations; `perm(g)[x] = g·x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupAction {
    group: FiniteGroup,
    perms: Vec<Vec<usize>>,
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn check_perm(p: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(Error::InvalidAction(format!("permutation has length {}, expected {n}", p.len())));
    }
    for &x in p {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidAction(format!("{p:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

impl GroupAction {
    /// The action in which every element fixes every point.
    pub fn trivial_on(group: FiniteGroup, n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        let perms = vec![id; group.order()];
        GroupAction { group, perms }
    }

    /// Builds the action from the images of the generators: the rotation
    /// `r` (omitted for the trivial group) and, for dihedral groups, the
    /// reflection `s`. Fails unless the images satisfy the group relations.
    pub fn from_generators(
        group: FiniteGroup,
        n: usize,
        rotation: Option<Vec<usize>>,
        reflection: Option<Vec<usize>>,
    ) -> Result<Self> {
        let id: Vec<usize> = (0..n).collect();
        let r = rotation.unwrap_or_else(|| id.clone());
        check_perm(&r, n)?;
        let s = match (group.reflection(), reflection) {
            (Some(_), Some(s)) => s,
            (Some(_), None) => {
                return Err(Error::InvalidAction(format!("{} needs a reflection generator", group.name())))
            }
            (None, Some(_)) => {
                return Err(Error::InvalidAction(format!("{} has no reflection generator", group.name())))
            }
            (None, None) => id.clone(),
        };
        check_perm(&s, n)?;
        // Element index a + k·b is r^a s^b.
        let k = if group.reflection().is_some() { group.order() / 2 } else { group.order() };
        let mut rpow = vec![id.clone()];
        for a in 1..k {
            rpow.push(compose(&r, &rpow[a - 1]));
        }
        let mut perms = rpow.clone();
        if group.reflection().is_some() {
            perms.extend(rpow.iter().map(|p| compose(p, &s)));
        }
        let action = GroupAction { group, perms };
        action.check_homomorphism()?;
        Ok(action)
    }

    /// Uses explicit permutations for every element, in the group's element order.
    pub fn from_perms(group: FiniteGroup, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} permutations for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        let n = perms.first().map_or(0, Vec::len);
        for p in &perms {
            check_perm(p, n)?;
        }
        let action = GroupAction { group, perms };
        action.check_homomorphism()?;
        Ok(action)
    }

    fn check_homomorphism(&self) -> Result<()> {
        let g = &self.group;
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.perms[g.mul(a, b)] != compose(&self.perms[a], &self.perms[b]) {
                    let names = g.element_names();
                    return Err(Error::InvalidAction(format!(
                        "perm({}·{}) differs from perm({})∘perm({})",
                        names[a], names[b], names[a], names[b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.perms.first().map_or(0, Vec::len)
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    /// `ρ(g)f = f ∘ g⁻¹`, as a matrix: `ρ(g)[g·y][y] = 1`.
    pub fn rho(&self, g: usize) -> Matrix {
        let n = self.n();
        let mut m = Matrix::zeros(n);
        for (y, &gy) in self.perms[g].iter().enumerate() {
            m[(gy, y)] = 1.0;
        }
        m
    }

    /// Orbit of `x` as a sorted vertex list.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.perms.iter().map(|p| p[x]).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

/// A weighted graph together with an action that preserves `μ`, the
/// conductances and the killing term. Validated on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricSystem {
    graph: WeightedGraph,
    action: GroupAction,
}

impl SymmetricSystem {
    pub fn new(graph: WeightedGraph, action: GroupAction) -> Result<Self> {
        if action.n() != graph.n() {
            return Err(Error::InvalidAction(format!(
                "action is on {} points, graph has {} vertices",
                action.n(),
                graph.n()
            )));
        }
        for g in 0..action.group().order() {
            let p = action.perm(g);
            let name = &action.group().element_names()[g];
            for x in 0..graph.n() {
                if graph.mu()[p[x]] != graph.mu()[x] {
                    return Err(Error::InvalidAction(format!("{name} does not preserve μ at vertex {x}")));
                }
                if let Some(k) = graph.kappa() {
                    if k[p[x]] != k[x] {
                        return Err(Error::InvalidAction(format!(
                            "{name} does not preserve the killing term at vertex {x}"
                        )));
                    }
                }
            }
            // Edges map to edges of equal conductance; counts match, so this is a bijection.
            for &(u, v, c) in graph.edges() {
                if graph.conductance(p[u], p[v]) != Some(c) {
                    return Err(Error::InvalidAction(format!(
                        "{name} maps edge ({u}, {v}) to a non-edge or different conductance"
                    )));
                }
            }
        }
        Ok(SymmetricSystem { graph, action })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_on_double_cycle() {
        let n = 6;
        let swap: Vec<usize> = (0..2 * n).map(|x| (x + n) % (2 * n)).collect();
        let act = GroupAction::from_generators(FiniteGroup::cyclic(2).unwrap(), 2 * n, Some(swap), None).unwrap();
        assert!(SymmetricSystem::new(WeightedGraph::double_cycle(n), act).is_ok());
    }

    #[test]
    fn rejects_broken_relations() {
        // A 3-cycle cannot be the image of the generator of ℤ₂.
        let act = GroupAction::from_generators(FiniteGroup::cyclic(2).unwrap(), 3, Some(vec![1, 2, 0]), None);
        assert!(matches!(act, Err(Error::InvalidAction(_))));
    }

    #[test]
    fn rejects_non_symmetries() {
        // Reversing a path of 3 vertices with unequal conductances.
        let g = WeightedGraph::new(vec![1.0; 3], vec![(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let act = GroupAction::from_generators(FiniteGroup::cyclic(2).unwrap(), 3, Some(vec![2, 1, 0]), None).unwrap();
        assert!(matches!(SymmetricSystem::new(g, act), Err(Error::InvalidAction(_))));
        let g = WeightedGraph::new(vec![1.0, 1.0, 2.0], vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let act = GroupAction::from_generators(FiniteGroup::cyclic(2).unwrap(), 3, Some(vec![2, 1, 0]), None).unwrap();
        assert!(SymmetricSystem::new(g, act).is_err());
    }

    #[test]
    fn laplacian_commutes_with_rho() {
        use crate::graph_symmetry::build_laplacian;
        let act = GroupAction::from_generators(
            FiniteGroup::dihedral(5).unwrap(),
            5,
            Some(vec![1, 2, 3, 4, 0]),
            Some(vec![0, 4, 3, 2, 1]),
        )
        .unwrap();
        let a = build_laplacian(&WeightedGraph::cycle(5));
        for g in 0..10 {
            let r = act.rho(g);
            assert!(a.mul(&r).max_abs_diff(&r.mul(&a)) <= 1e-10 * a.frobenius_norm());
        }
    }
}
