use serde::Serialize;

use crate::numerics::{sym_eig, EigenDecomposition, Matrix};
use crate::{Error, Result};

/// A finite weighted graph: vertex measures `μ(x) > 0`, symmetric edge
/// conductances `c_xy > 0`, and an optional killing term `κ(x) ≥ 0`
/// (used to impose Dirichlet conditions on removed boundary vertices).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedGraph {
    mu: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    kappa: Option<Vec<f64>>,
}

impl WeightedGraph {
    /// Duplicate edges between the same pair are merged by adding conductances.
    pub fn new(mu: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = mu.len();
        if let Some((x, m)) = mu.iter().enumerate().find(|(_, m)| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidInput(format!("vertex {x} has non-positive measure {m}")));
        }
        let mut merged: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
        for &(u, v, c) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) refers to a missing vertex")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::NonPositiveConductance { u, v, c });
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += c;
        }
        Ok(WeightedGraph {
            mu,
            edges: merged.into_iter().map(|((u, v), c)| (u, v, c)).collect(),
            kappa: None,
        })
    }

    /// Unit measure and unit conductances.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(vec![1.0; n], edges.iter().map(|&(u, v)| (u, v, 1.0)).collect())
    }

    pub fn with_killing(mut self, kappa: Vec<f64>) -> Result<Self> {
        if kappa.len() != self.mu.len() || kappa.iter().any(|k| !(*k >= 0.0 && k.is_finite())) {
            return Err(Error::InvalidInput("killing term must be nonnegative, one per vertex".into()));
        }
        self.kappa = Some(kappa);
        Ok(self)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::unweighted(n, &edges).expect("valid complete graph")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::unweighted(n, &edges).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::unweighted(n, &edges).expect("valid path")
    }

    /// Two `N`-cycles `x_j = j`, `y_j = N + j` joined by the rungs `x_j ~ y_j`.
    pub fn double_cycle(n: usize) -> Self {
        let mut edges = Vec::new();
        for j in 0..n {
            edges.push((j, (j + 1) % n));
            edges.push((n + j, n + (j + 1) % n));
            edges.push((j, n + j));
        }
        Self::unweighted(2 * n, &edges).expect("valid double cycle")
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn total_measure(&self) -> f64 {
        self.mu.iter().sum()
    }

    /// Edges `(u, v, c)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn kappa(&self) -> Option<&[f64]> {
        self.kappa.as_deref()
    }

    pub fn conductance(&self, u: usize, v: usize) -> Option<f64> {
        let key = (u.min(v), u.max(v));
        self.edges
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
            .ok()
            .map(|i| self.edges[i].2)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors().iter().map(Vec::len).collect()
    }
}

/// Matrix of `Au(x) = (1/μ(x)) [Σ_y c_xy (u(x) - u(y)) + κ(x) u(x)]`,
/// conjugated by `μ^{1/2}` so it is symmetric with the same eigenvalues.
pub fn build_laplacian(g: &WeightedGraph) -> Matrix {
    let n = g.n();
    let mut a = Matrix::zeros(n);
    let s: Vec<f64> = g.mu.iter().map(|m| m.sqrt()).collect();
    for &(u, v, c) in &g.edges {
        a[(u, u)] += c / g.mu[u];
        a[(v, v)] += c / g.mu[v];
        let off = -c / (s[u] * s[v]);
        a[(u, v)] = off;
        a[(v, u)] = off;
    }
    if let Some(k) = &g.kappa {
        for x in 0..n {
            a[(x, x)] += k[x] / g.mu[x];
        }
    }
    a
}

/// Eigendecomposition of the symmetrised Laplacian.
pub fn laplacian_spectrum(g: &WeightedGraph) -> Result<EigenDecomposition> {
    sym_eig(&build_laplacian(g))
}

/// `R(u) = [Σ_edges c_xy |u(x)-u(y)|² + Σ κ(x)|u(x)|²] / Σ |u(x)|² μ(x)`.
pub fn rayleigh(g: &WeightedGraph, u: &[f64]) -> Result<f64> {
    if u.len() != g.n() {
        return Err(Error::InvalidInput(format!(
            "vertex function has {} values for {} vertices",
            u.len(),
            g.n()
        )));
    }
    let den: f64 = u.iter().zip(&g.mu).map(|(x, m)| x * x * m).sum();
    if den == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut num: f64 = g.edges.iter().map(|&(x, y, c)| c * (u[x] - u[y]).powi(2)).sum();
    if let Some(k) = &g.kappa {
        num += u.iter().zip(k).map(|(x, k)| k * x * x).sum::<f64>();
    }
    Ok(num / den)
}

/// `max{dim L : R|_L ≤ λ}`, which equals the number of eigenvalues `≤ λ`.
pub fn minmax_count(g: &WeightedGraph, lambda: f64) -> Result<usize> {
    Ok(laplacian_spectrum(g)?.count_le(lambda))
}
