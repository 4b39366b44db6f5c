use serde::Serialize;

use super::action::SymmetricSystem;
use super::isotypic::IsotypicCount;
use crate::{Error, Result};

/// A vertex set `F` whose translates `gF` cover the graph, with its
/// boundary `∂F`: the points of `F` that lie in, or have an edge to, some
/// `gF` with `g ≠ e`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundamentalDomain {
    pub f: Vec<usize>,
    pub boundary: Vec<usize>,
}

impl FundamentalDomain {
    pub fn new(sys: &SymmetricSystem, f: &[usize]) -> Result<Self> {
        let n = sys.graph().n();
        let mut in_f = vec![false; n];
        for &x in f {
            if x >= n {
                return Err(Error::InvalidInput(format!("vertex {x} is not in the graph")));
            }
            in_f[x] = true;
        }
        let action = sys.action();
        let order = action.group().order();
        // in_other[x]: x ∈ gF for some g ≠ e.
        let mut covered = in_f.clone();
        let mut in_other = vec![false; n];
        for g in 1..order {
            for &x in f {
                let gx = action.perm(g)[x];
                covered[gx] = true;
                in_other[gx] = true;
            }
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidInput(format!(
                "translates of F do not cover vertex {x}"
            )));
        }
        let adj = sys.graph().neighbors();
        let mut boundary: Vec<usize> = (0..n)
            .filter(|&x| in_f[x] && (in_other[x] || adj[x].iter().any(|&y| in_other[y])))
            .collect();
        boundary.sort_unstable();
        let mut f = f.to_vec();
        f.sort_unstable();
        f.dedup();
        Ok(FundamentalDomain { f, boundary })
    }

    pub fn boundary_size(&self) -> usize {
        self.boundary.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma51Row {
    pub lambda: f64,
    pub total: usize,
    pub counts: Vec<usize>,
    /// `|N_j - (Σd²)_j N / #G|` per irrep.
    pub deviation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma51Report {
    pub boundary_size: usize,
    pub bound_rhs: Vec<usize>,
    pub rows: Vec<Lemma51Row>,
    /// Largest `deviation / rhs` seen (0 when every rhs is 0 and every deviation is 0).
    pub max_ratio: f64,
    /// Smallest `rhs - deviation` seen.
    pub min_slack: f64,
}

/// Checks `|N_j(λ) - (Σd²)_j N(λ)/#G| ≤ (Σd²)_j #∂F` at every `λ` in
/// `lambda_grid`, or at every eigenvalue level when the grid is empty.
pub fn lemma51_check(
    counts: &IsotypicCount,
    fd: &FundamentalDomain,
    lambda_grid: &[f64],
) -> Result<Lemma51Report> {
    let grid: Vec<f64> = if lambda_grid.is_empty() {
        counts.levels.iter().map(|l| l.lambda).collect()
    } else {
        lambda_grid.to_vec()
    };
    let b = fd.boundary_size();
    let rhs: Vec<usize> = (0..counts.irreps.len()).map(|j| counts.bound_rhs(j, b)).collect();
    let mut rows = Vec::with_capacity(grid.len());
    let (mut max_ratio, mut min_slack) = (0.0f64, f64::INFINITY);
    for &lambda in &grid {
        let total = counts.total(lambda);
        let c = counts.counts(lambda);
        let mut deviation = Vec::with_capacity(c.len());
        for (j, &nj) in c.iter().enumerate() {
            // Exact in integers: #G·N_j - w_j·N.
            let scaled = (counts.group_order * nj) as i64 - (counts.irreps[j].weight() * total) as i64;
            let dev = scaled.unsigned_abs() as f64 / counts.group_order as f64;
            if scaled.unsigned_abs() as usize > counts.group_order * rhs[j] {
                return Err(Error::BoundViolated {
                    lambda,
                    detail: format!(
                        "|N_{} - {}N/{}| = {dev} exceeds {}",
                        counts.irreps[j].name,
                        counts.irreps[j].weight(),
                        counts.group_order,
                        rhs[j]
                    ),
                });
            }
            if rhs[j] > 0 {
                max_ratio = max_ratio.max(dev / rhs[j] as f64);
            }
            min_slack = min_slack.min(rhs[j] as f64 - dev);
            deviation.push(dev);
        }
        rows.push(Lemma51Row {
            lambda,
            total,
            counts: c,
            deviation,
        });
    }
    Ok(Lemma51Report {
        boundary_size: b,
        bound_rhs: rhs,
        rows,
        max_ratio,
        min_slack,
    })
}
