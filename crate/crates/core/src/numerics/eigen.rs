use std::ops::Range;

use super::Matrix;
use crate::{Error, Result};

pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Knobs for [`sym_eig_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub size_cap: usize,
    /// Largest tolerated `|a_ij - a_ji|`, relative to `max(1, max |a_ij|)`.
    pub symmetry_tol: f64,
    pub max_sweeps: usize,
    /// Relative width of an eigenvalue cluster, as a fraction of the spectral radius.
    pub cluster_rel_tol: f64,
    pub vectors: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            size_cap: DEFAULT_SIZE_CAP,
            symmetry_tol: 1e-12,
            max_sweeps: 60,
            cluster_rel_tol: 1e-8,
            vectors: true,
        }
    }
}

/// Sorted spectrum of a real symmetric matrix with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    // Row i is the eigenvector of eigenvalue i. Empty when vectors were not requested.
    vectors: Vec<f64>,
    cluster_tol: f64,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn has_vectors(&self) -> bool {
        !self.vectors.is_empty() || self.n == 0
    }

    /// Unit eigenvector for `eigenvalues()[i]`.
    pub fn eigenvector(&self, i: usize) -> &[f64] {
        assert!(!self.vectors.is_empty(), "eigenvectors were not computed");
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    /// Matrix whose column `i` is eigenvector `i`.
    pub fn eigenvector_matrix(&self) -> Matrix {
        let mut v = Matrix::zeros(self.n);
        for i in 0..self.n {
            for (k, x) in self.eigenvector(i).iter().enumerate() {
                v[(k, i)] = *x;
            }
        }
        v
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Number of eigenvalues `≤ lambda`, counting a cluster straddling
    /// `lambda` within `cluster_tol` as included.
    pub fn count_le(&self, lambda: f64) -> usize {
        self.eigenvalues
            .partition_point(|&x| x <= lambda + self.cluster_tol)
    }

    /// Index ranges of maximal runs whose consecutive gaps are `≤ cluster_tol`.
    pub fn clusters(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.eigenvalues.len() {
            if i == self.eigenvalues.len()
                || self.eigenvalues[i] - self.eigenvalues[i - 1] > self.cluster_tol
            {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n;
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            let v = self.eigenvector(i);
            let l = self.eigenvalues[i];
            for r in 0..n {
                let lv = l * v[r];
                if lv == 0.0 {
                    continue;
                }
                for (dst, x) in a.row_mut(r).iter_mut().zip(v) {
                    *dst += lv * x;
                }
            }
        }
        a
    }
}

/// Full eigendecomposition of a dense symmetric matrix with default options.
pub fn sym_eig(a: &Matrix) -> Result<EigenDecomposition> {
    sym_eig_with(a, &EigenOptions::default())
}

/// Cyclic Jacobi eigensolver.
///
/// Rotations are applied in round-robin order: each round annihilates
/// `n/2` disjoint pivots, so the rotation angles of a round can all be
/// taken from the current `2×2` blocks and applied as row sweeps.
pub fn sym_eig_with(a: &Matrix, opts: &EigenOptions) -> Result<EigenDecomposition> {
    let n = a.n();
    if n > opts.size_cap {
        return Err(Error::TooLarge {
            size: n,
            cap: opts.size_cap,
        });
    }
    let scale = a.max_abs().max(1.0);
    let asym = a.max_asymmetry();
    if !(asym <= opts.symmetry_tol * scale) {
        return Err(Error::NotSymmetric(asym));
    }
    if n == 0 {
        return Ok(EigenDecomposition {
            n,
            eigenvalues: Vec::new(),
            vectors: Vec::new(),
            cluster_tol: 0.0,
        });
    }

    // Work on the exactly symmetric part.
    let mut w = a.clone();
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (w[(i, j)] + w[(j, i)]);
            w[(i, j)] = m;
            w[(j, i)] = m;
        }
    }
    let mut vt = if opts.vectors {
        Matrix::identity(n)
    } else {
        Matrix::zeros(0)
    };
    let floor = 1e-20 * w.frobenius_norm();

    let m = if n % 2 == 0 { n } else { n + 1 };
    let mut ring: Vec<usize> = (0..m).collect();
    let mut rots: Vec<Rot> = Vec::with_capacity(m / 2);
    let mut converged = false;
    for _ in 0..opts.max_sweeps {
        let mut rotated = false;
        for _ in 0..m - 1 {
            rots.clear();
            for k in 0..m / 2 {
                let (x, y) = (ring[k], ring[m - 1 - k]);
                if x >= n || y >= n {
                    continue;
                }
                let (p, q) = if x < y { (x, y) } else { (y, x) };
                if let Some(r) = rotation(&w, p, q, floor) {
                    rots.push(r);
                }
            }
            if !rots.is_empty() {
                rotated = true;
                apply_round(&mut w, &mut vt, &rots, opts.vectors);
            }
            // Keep ring[0] fixed and rotate the rest.
            let last = ring[m - 1];
            for k in (2..m).rev() {
                ring[k] = ring[k - 1];
            }
            ring[1] = last;
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergent(format!(
            "Jacobi did not converge in {} sweeps (n = {n})",
            opts.max_sweeps
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].total_cmp(&w[(j, j)]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| w[(i, i)]).collect();
    let mut vectors = Vec::new();
    if opts.vectors {
        vectors.reserve(n * n);
        for &i in &order {
            vectors.extend_from_slice(vt.row(i));
        }
    }
    let rho = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(EigenDecomposition {
        n,
        eigenvalues,
        vectors,
        cluster_tol: opts.cluster_rel_tol * rho,
    })
}

#[derive(Debug, Clone, Copy)]
struct Rot {
    p: usize,
    q: usize,
    c: f64,
    s: f64,
}

fn rotation(w: &Matrix, p: usize, q: usize, floor: f64) -> Option<Rot> {
    let apq = w[(p, q)];
    let app = w[(p, p)];
    let aqq = w[(q, q)];
    if apq.abs() <= floor || apq.abs() <= f64::EPSILON * (app * aqq).abs().sqrt() {
        return None;
    }
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    Some(Rot { p, q, c, s: t * c })
}

fn rotate_rows(data: &mut [f64], n: usize, r: &Rot) {
    // p < q, so the split gives disjoint mutable rows.
    let (head, tail) = data.split_at_mut(r.q * n);
    let rp = &mut head[r.p * n..(r.p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = r.c * a - r.s * b;
        *y = r.s * a + r.c * b;
    }
}

fn apply_round(w: &mut Matrix, vt: &mut Matrix, rots: &[Rot], vectors: bool) {
    let n = w.n();
    for r in rots {
        rotate_rows(w.data_mut(), n, r);
        if vectors {
            rotate_rows(vt.data_mut(), n, r);
        }
    }
    for k in 0..n {
        let row = w.row_mut(k);
        for r in rots {
            let (a, b) = (row[r.p], row[r.q]);
            row[r.p] = r.c * a - r.s * b;
            row[r.q] = r.s * a + r.c * b;
        }
    }
    for r in rots {
        w[(r.p, r.q)] = 0.0;
        w[(r.q, r.p)] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::SeededRng;

    fn random_symmetric(n: usize, seed: u64) -> Matrix {
        let mut rng = SeededRng::new(seed);
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let x = rng.uniform_in(-1.0, 1.0);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        a
    }

    fn complete_graph(n: usize) -> Matrix {
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = if i == j { (n - 1) as f64 } else { -1.0 };
            }
        }
        a
    }

    #[test]
    fn complete_graph_k3() {
        let e = sym_eig(&complete_graph(3)).unwrap();
        let l = e.eigenvalues();
        assert!(l[0].abs() < 1e-14);
        assert!((l[1] - 3.0).abs() < 1e-13 && (l[2] - 3.0).abs() < 1e-13);
        assert_eq!(e.clusters(), vec![0..1, 1..3]);
        assert_eq!(e.count_le(1.0), 1);
        assert_eq!(e.count_le(3.0), 3);
    }

    #[test]
    fn one_by_one() {
        let e = sym_eig(&Matrix::diagonal(&[-2.5])).unwrap();
        assert_eq!(e.eigenvalues(), &[-2.5]);
        assert_eq!(e.eigenvector(0), &[1.0]);
    }

    #[test]
    fn empty_matrix() {
        let e = sym_eig(&Matrix::zeros(0)).unwrap();
        assert!(e.eigenvalues().is_empty());
        assert!(e.clusters().is_empty());
    }

    #[test]
    fn rejects_asymmetric_and_oversized() {
        let mut a = Matrix::identity(3);
        a[(0, 1)] = 1e-6;
        assert!(matches!(sym_eig(&a), Err(Error::NotSymmetric(_))));
        let opts = EigenOptions {
            size_cap: 2,
            ..Default::default()
        };
        assert!(matches!(
            sym_eig_with(&Matrix::identity(3), &opts),
            Err(Error::TooLarge { size: 3, cap: 2 })
        ));
    }

    #[test]
    fn random_matrix_invariants() {
        for (n, seed) in [(2, 1), (7, 2), (40, 3), (65, 4)] {
            let a = random_symmetric(n, seed);
            let e = sym_eig(&a).unwrap();
            let norm = a.frobenius_norm();
            assert!(e.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
            for i in 0..n {
                let av = a.mul_vec(e.eigenvector(i));
                for (k, x) in av.iter().enumerate() {
                    assert!((x - e.eigenvalues()[i] * e.eigenvector(i)[k]).abs() <= 1e-8 * norm);
                }
                for j in 0..n {
                    let d: f64 = e
                        .eigenvector(i)
                        .iter()
                        .zip(e.eigenvector(j))
                        .map(|(x, y)| x * y)
                        .sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < 1e-10);
                }
            }
            assert!(e.reconstruct().max_abs_diff(&a) <= 1e-8 * norm);
            let tr: f64 = e.eigenvalues().iter().sum();
            assert!((tr - a.trace()).abs() <= 1e-8 * norm);
        }
    }

    #[test]
    fn eigenvalues_only_matches() {
        let a = random_symmetric(30, 9);
        let full = sym_eig(&a).unwrap();
        let opts = EigenOptions {
            vectors: false,
            ..Default::default()
        };
        let vals = sym_eig_with(&a, &opts).unwrap();
        assert!(!vals.has_vectors());
        for (x, y) in full.eigenvalues().iter().zip(vals.eigenvalues()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
