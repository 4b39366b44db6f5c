use std::f64::consts::PI;

use proptest::prelude::*;
use spectramass::covering::{circle_mass, cover_sum_circle, line_cover_partial_sums, CircleCover};
use spectramass::domains::{cube_counting, halfline_kernel_diag, BoundaryCondition};
use spectramass::graph_symmetry::{
    build_laplacian, isotypic_counts, isotypic_projector, FiniteGroup, GroupAction, SymmetricSystem, WeightedGraph,
};
use spectramass::homogeneous::{
    euclidean_mass, heisenberg_mass, lattice_mass, tree_mass, tree_spectrum, HomogeneousSpace,
};
use spectramass::lie_symmetry::{product_counts, BaseCounts, ProductSpectrum};
use spectramass::numerics::{bessel_j_upto, integrate, sym_eig, Matrix, Quadrature};

fn bc() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![Just(BoundaryCondition::Dirichlet), Just(BoundaryCondition::Neumann)]
}

fn symmetric(n: usize, vals: &[f64]) -> Matrix {
    let mut a = Matrix::zeros(n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            a[(i, j)] = vals[k];
            a[(j, i)] = vals[k];
            k += 1;
        }
    }
    a
}

/// Circulant on ℤ_{k·b} with jumps 1 and `jump`, under rotation by `b` steps (and `i ↦ -i`).
fn circulant(k: usize, b: usize, jump: usize, w: f64, dihedral: bool) -> SymmetricSystem {
    let n = k * b;
    let mut edges = std::collections::BTreeMap::new();
    for (s, c) in [(1, 1.0), (jump % n, w)] {
        if s == 0 {
            continue;
        }
        for i in 0..n {
            let (a, bb) = (i, (i + s) % n);
            edges.entry((a.min(bb), a.max(bb))).or_insert(c);
        }
    }
    let g = WeightedGraph::new(vec![1.0; n], edges.into_iter().map(|((a, b), c)| (a, b, c)).collect()).unwrap();
    let r = (0..n).map(|i| (i + b) % n).collect();
    let (group, s) = if dihedral {
        (FiniteGroup::dihedral(k).unwrap(), Some((0..n).map(|i| (n - i) % n).collect()))
    } else {
        (FiniteGroup::cyclic(k).unwrap(), None)
    };
    SymmetricSystem::new(g, GroupAction::from_generators(group, n, Some(r), s).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integrate_is_linear(c in prop::collection::vec(-3.0f64..3.0, 4), d in prop::collection::vec(-3.0f64..3.0, 4),
                           alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let p = |x: f64, k: &[f64]| k.iter().rev().fold(0.0, |acc, &ci| acc * x + ci);
        let q = Quadrature::with_tol(1e-12);
        let both = integrate(|x| alpha * p(x, &c) + beta * p(x, &d), -1.0, 2.0, &q).unwrap();
        let split = alpha * integrate(|x| p(x, &c), -1.0, 2.0, &q).unwrap()
            + beta * integrate(|x| p(x, &d), -1.0, 2.0, &q).unwrap();
        prop_assert!((both - split).abs() < 1e-9);
    }

    #[test]
    fn eigenvalues_survive_permutation(vals in prop::collection::vec(-1.0f64..1.0, 21), seed in any::<u64>()) {
        let a = symmetric(6, &vals);
        let mut perm: Vec<usize> = (0..6).collect();
        let mut rng = spectramass::numerics::SeededRng::new(seed);
        rng.shuffle(&mut perm);
        let e1 = sym_eig(&a).unwrap();
        let e2 = sym_eig(&a.permute_symmetric(&perm)).unwrap();
        for (x, y) in e1.eigenvalues().iter().zip(e2.eigenvalues()) {
            prop_assert!((x - y).abs() <= e1.cluster_tol().max(1e-12));
        }
        let sum: f64 = e1.eigenvalues().iter().sum();
        prop_assert!((sum - a.trace()).abs() <= 1e-8 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn bessel_recurrence(x in 0.5f64..50.0) {
        let j = bessel_j_upto(21, x);
        for n in 1..=20 {
            let lhs = j[n - 1] + j[n + 1];
            prop_assert!((lhs - 2.0 * n as f64 / x * j[n]).abs() < 1e-8, "n = {}, x = {}", n, x);
        }
    }

    #[test]
    fn masses_are_monotone_and_nonnegative(a in 0.0f64..30.0, b in 0.0f64..30.0, which in 0usize..10) {
        let space = [
            HomogeneousSpace::Euclidean(1),
            HomogeneousSpace::Euclidean(3),
            HomogeneousSpace::Lattice(1),
            HomogeneousSpace::Lattice(2),
            HomogeneousSpace::Hyperbolic(2),
            HomogeneousSpace::Hyperbolic(3),
            HomogeneousSpace::Heisenberg(1),
            HomogeneousSpace::Heisenberg(2),
            HomogeneousSpace::Tree(2),
            HomogeneousSpace::Tree(5),
        ][which];
        let (lo, hi) = (a.min(b), a.max(b));
        let (m_lo, m_hi) = (space.mass(lo).unwrap(), space.mass(hi).unwrap());
        prop_assert!(m_lo.value >= 0.0);
        prop_assert!(m_hi.value >= m_lo.value - m_hi.err_est - m_lo.err_est, "{} at {} / {}", space.tag(), lo, hi);
    }

    #[test]
    fn tree_gap_is_empty(q in 2u32..12, frac in 0.0f64..=1.0) {
        let (edge, _) = tree_spectrum(q);
        prop_assert_eq!(tree_mass(q, frac * edge).unwrap(), 0.0);
    }

    #[test]
    fn heisenberg_power_law(n in 1usize..=3, l in 0.1f64..50.0, f in 1.1f64..10.0) {
        let slope = (heisenberg_mass(n, f * l).unwrap() / heisenberg_mass(n, l).unwrap()).ln() / f.ln();
        prop_assert!((slope - (n as f64 + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn lattice_matches_euclidean_at_low_energy(n in 1usize..=3, l in 1e-4f64..0.01) {
        let r = lattice_mass(n, l).unwrap() / euclidean_mass(n, l);
        prop_assert!((r - 1.0).abs() <= 0.02);
    }

    #[test]
    fn halfline_reflections_cancel(l in 0.0f64..100.0, x in 1e-3f64..50.0) {
        let s = halfline_kernel_diag(l, x, BoundaryCondition::Neumann)
            + halfline_kernel_diag(l, x, BoundaryCondition::Dirichlet);
        prop_assert!((s - 2.0 * l.sqrt() / PI).abs() <= 1e-12 * (1.0 + l.sqrt()));
    }

    #[test]
    fn cube_counts_monotone_and_scaled(s in 0.2f64..3.0, t in 1.0f64..2.0, n in 1usize..=3,
                                       l in 0.0f64..200.0, dl in 0.0f64..50.0, bc in bc()) {
        let c = cube_counting(s, n, bc, l).unwrap();
        prop_assert!(cube_counting(s, n, bc, l + dl).unwrap() >= c);
        prop_assert!(cube_counting(s * t, n, bc, l).unwrap() >= c);
        prop_assert!(cube_counting(s, n, BoundaryCondition::Neumann, l).unwrap()
            >= cube_counting(s, n, BoundaryCondition::Dirichlet, l).unwrap());
        // Powers of two keep s²λ exact, so the scaling identity is tested without rounding.
        let s2 = [0.5, 1.0, 2.0, 4.0][(s * 10.0) as usize % 4];
        prop_assert_eq!(cube_counting(s2, n, bc, l).unwrap(), cube_counting(1.0, n, bc, s2 * s2 * l).unwrap());
    }

    #[test]
    fn isotypic_counts_partition_the_spectrum(k in 2usize..7, b in 1usize..4, jump in 2usize..6,
                                               w in 0.3f64..3.0, dihedral in any::<bool>()) {
        let sys = circulant(k, b, jump, w, dihedral);
        let c = isotypic_counts(&sys).unwrap();
        for level in &c.levels {
            prop_assert_eq!(level.per_irrep.iter().sum::<usize>(), level.multiplicity);
        }
        let a = build_laplacian(sys.graph());
        let n = sys.graph().n();
        let mut total = Matrix::zeros(n);
        let projectors: Vec<Matrix> =
            (0..c.irreps.len()).map(|j| isotypic_projector(sys.action(), j).unwrap()).collect();
        for (i, p) in projectors.iter().enumerate() {
            prop_assert!(p.mul(p).max_abs_diff(p) < 1e-8);
            for q in &projectors[i + 1..] {
                prop_assert!(p.mul(q).max_abs() < 1e-8);
            }
            total.add_scaled(p, 1.0);
        }
        prop_assert!(total.max_abs_diff(&Matrix::identity(n)) < 1e-8);
        for g in 0..sys.action().group().order() {
            let rho = sys.action().rho(g);
            prop_assert!(a.mul(&rho).max_abs_diff(&rho.mul(&a)) <= 1e-10 * a.frobenius_norm());
        }
    }

    #[test]
    fn product_ratios_follow_dimensions(beta in 0.3f64..3.0, c in 0.1f64..5.0) {
        let ps = ProductSpectrum::su2(4, BaseCounts::PowerLaw { c, beta }).unwrap();
        let l = 1e9;
        for j in 1..4 {
            let r = product_counts(&ps, j, l).unwrap() / product_counts(&ps, 0, l).unwrap();
            let d2 = ((j + 1) * (j + 1)) as f64;
            prop_assert!((r / d2 - 1.0).abs() < 1e-6 * (1.0 + beta) * 16.0);
        }
    }

    #[test]
    fn cover_sum_is_the_circle_mass(n in 1u64..=16, l in 0.0f64..5e4) {
        let cv = CircleCover::new(n).unwrap();
        let m = circle_mass(l).unwrap();
        prop_assert_eq!(cover_sum_circle(&cv, l).unwrap(), m);
        prop_assert!((m - cv.cover_mass(l).unwrap()).abs() <= 2.0);
    }

    #[test]
    fn line_partial_sums_decay_with_phase_distance(l in 0.5f64..400.0) {
        prop_assume!((l.sqrt() / (2.0 * PI)).fract().min(1.0 - (l.sqrt() / (2.0 * PI)).fract()) > 1e-4);
        let s = line_cover_partial_sums(l, 20_000).unwrap();
        // sup_Γ |S_Γ - limit| · dist(√λ, 2πℤ) stays below 2; the measured maximum is ≈ π/4.
        prop_assert!(s.max_partial_error() * s.phase_distance() < 2.0);
    }
}
