//! The twelve acceptance checks, shared by the integration test suite and
//! `spectramass verify`.
//!
//! Each check runs to its tolerance and returns a [`CriterionReport`]; a
//! numerical failure inside a check is reported as a failed criterion
//! rather than propagated.

use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;

use crate::covering::{circle_mass, cover_sum_circle, line_cover_partial_sums, CircleCover};
use crate::domains::BoundaryCondition;
use crate::fractal_sg::{sg_splitting, sg_weyl_periodicity, sg_weyl_ratio};
use crate::graph_symmetry::{
    isotypic_counts, laplacian_spectrum, lemma51_check, torus_d4_counts, FiniteGroup, FundamentalDomain,
    GroupAction, SymmetricSystem, WeightedGraph,
};
use crate::homogeneous::{
    heat_transform, heisenberg_constant, hyperbolic_mass, lattice_mass, spectral_vs_heat_bound, tree_gap_coefficient,
    tree_mass, tree_spectrum, HomogeneousSpace, SpectralMassCurve, WeylConstant,
};
use crate::lie_symmetry::{so2_asymptotic_limit, so2_component_mass, so2_printed_limit};
use crate::numerics::SeededRng;
use crate::{Error, Result};

/// Short name and runtime budget in seconds of each criterion, in order.
pub const CRITERIA: [(&str, Option<f64>); 12] = [
    ("lattice-closed-form", Some(1.0)),
    ("heisenberg-constants", Some(1.0)),
    ("hyperbolic-weyl", Some(5.0)),
    ("tree-plancherel", Some(5.0)),
    ("heat-identity", None),
    ("double-cycle", None),
    ("boundary-lemma", Some(60.0)),
    ("torus-d4", None),
    ("sg-splitting", Some(120.0)),
    ("sg-weyl-ratio", None),
    ("covering", None),
    ("so2-splitting", None),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget: Option<f64>,
}

impl CriterionReport {
    /// One line: `PASS  3 hyperbolic-weyl (0.12 s) ...`.
    pub fn line(&self) -> String {
        let budget = match self.budget {
            Some(b) => format!(" of {b} s"),
            None => String::new(),
        };
        format!(
            "{} {:>2} {} ({:.2} s{}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            budget,
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

/// Runs criterion `id` (1 to 12).
pub fn run_criterion(id: usize) -> Result<CriterionReport> {
    let check: fn() -> Result<Outcome> = match id {
        1 => lattice_closed_form,
        2 => heisenberg_constants,
        3 => hyperbolic_weyl,
        4 => tree_plancherel,
        5 => heat_identity,
        6 => double_cycle,
        7 => boundary_lemma,
        8 => torus_d4,
        9 => sg_split,
        10 => sg_weyl,
        11 => covering,
        12 => so2_splitting,
        _ => return Err(Error::InvalidInput(format!("criteria are numbered 1 to 12, got {id}"))),
    };
    let (name, budget) = CRITERIA[id - 1];
    let start = Instant::now();
    let outcome = check().unwrap_or_else(|e| Outcome {
        passed: false,
        detail: format!("error: {e}"),
    });
    let seconds = start.elapsed().as_secs_f64();
    let mut passed = outcome.passed;
    let mut detail = outcome.detail;
    if let Some(b) = budget {
        if seconds > b {
            passed = false;
            detail.push_str(&format!("; over the {b} s budget"));
        }
    }
    Ok(CriterionReport {
        id,
        name,
        passed,
        detail,
        seconds,
        budget,
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERIA.len()).map(|i| run_criterion(i).expect("valid id")).collect()
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let r = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| lo * (r * i as f64).exp()).collect()
}

fn lattice_closed_form() -> Result<Outcome> {
    let m2 = lattice_mass(1, 2.0)?;
    let m4 = lattice_mass(1, 4.0)?;
    // λ = 2 - 2cos 2πξ inverted directly, then doubled for ±ξ.
    let mut worst = 0.0f64;
    for i in 0..400 {
        let l = 4.4 * i as f64 / 399.0;
        let exact = if l >= 4.0 { 1.0 } else { (1.0 - l / 2.0).acos() / PI };
        worst = worst.max((lattice_mass(1, l)? - exact).abs());
    }
    let d2 = (m2 - 0.5).abs();
    let d4 = (m4 - 1.0).abs();
    Ok(Outcome {
        passed: d2 <= 1e-12 && d4 <= 1e-12 && worst <= 1e-12,
        detail: format!("|M(2)-1/2| = {d2:.1e}, |M(4)-1| = {d4:.1e}, 400-point max error {worst:.1e}"),
    })
}

fn heisenberg_constants() -> Result<Outcome> {
    let d1 = (heisenberg_constant(1)? - 1.0 / 32.0).abs();
    let d2 = (heisenberg_constant(2)? - 1.0 / (576.0 * PI)).abs();
    Ok(Outcome {
        passed: d1 <= 1e-10 && d2 <= 1e-10,
        detail: format!("n=1 off 1/32 by {d1:.1e}, n=2 off 1/(576π) by {d2:.1e}"),
    })
}

fn hyperbolic_weyl() -> Result<Outcome> {
    let c3 = WeylConstant::new(3).c_n;
    let mut worst = 0.0f64;
    for l in geometric(1.1, 100.0, 200) {
        let exact = c3 * (l - 1.0).powf(1.5);
        worst = worst.max((hyperbolic_mass(3, l)? / exact - 1.0).abs());
    }
    let c2 = WeylConstant::new(2).c_n;
    let ratio = hyperbolic_mass(2, 1e4)? / (c2 * 1e4);
    Ok(Outcome {
        passed: worst <= 1e-8 && (ratio - 1.0).abs() <= 1e-2,
        detail: format!("n=3 max relative error {worst:.1e} on [1.1, 100]; n=2 ratio at 1e4 = {ratio:.5}"),
    })
}

fn tree_plancherel() -> Result<Outcome> {
    let mut total_err = 0.0f64;
    let mut extrap_err = 0.0f64;
    let mut raw_err = 0.0f64;
    let (mut printed_lo, mut printed_hi) = (f64::INFINITY, 0.0f64);
    for q in [2u32, 3, 4, 9] {
        let (lo, top) = tree_spectrum(q);
        total_err = total_err.max((tree_mass(q, top)? - 1.0).abs());
        let a = tree_gap_coefficient(q);
        let r = |eps: f64| -> Result<f64> { Ok(tree_mass(q, lo + eps)? / eps.powf(1.5)) };
        for eps in geometric(1e-4, 1e-2, 9) {
            let (r1, r2) = (r(eps)?, r(eps / 2.0)?);
            // M(λ₀+ε)/ε^{3/2} = a + O(ε); one Richardson step removes the O(ε) term.
            let est = 2.0 * r2 - r1;
            extrap_err = extrap_err.max((est / a - 1.0).abs());
            raw_err = raw_err.max((r1 / a - 1.0).abs());
            let printed = a * (q as f64).ln().powi(3);
            printed_lo = printed_lo.min(est / printed);
            printed_hi = printed_hi.max(est / printed);
        }
    }
    Ok(Outcome {
        passed: total_err <= 1e-6 && extrap_err <= 0.02,
        detail: format!(
            "total mass error {total_err:.1e}; gap coefficient 2q^(1/4)(q+1)/(3π(q-1)²) matched to {extrap_err:.1e} \
             (extrapolated), {raw_err:.1e} (raw M/ε^1.5); ratio to the form with a (log q)³ factor spans \
             [{printed_lo:.3}, {printed_hi:.3}]"
        ),
    })
}

fn heat_identity() -> Result<Outcome> {
    let mut grid = Vec::new();
    let mut l = 1e-10;
    while l < 1e4 {
        grid.push(l);
        l *= 1.0005;
    }
    let mut worst_abs = 0.0f64;
    let mut worst_rel = 0.0f64;
    for n in 1..=3 {
        let curve = SpectralMassCurve::sample(&HomogeneousSpace::Euclidean(n), &grid)?;
        for t in [0.1, 1.0, 10.0] {
            let exact = (4.0 * PI * t).powf(-(n as f64) / 2.0);
            let d = (heat_transform(&curve, t)? - exact).abs();
            worst_abs = worst_abs.max(d);
            worst_rel = worst_rel.max(d / exact);
        }
    }
    let spaces = [
        HomogeneousSpace::Euclidean(1),
        HomogeneousSpace::Euclidean(2),
        HomogeneousSpace::Euclidean(3),
        HomogeneousSpace::Lattice(1),
        HomogeneousSpace::Lattice(2),
        HomogeneousSpace::Lattice(3),
        HomogeneousSpace::Hyperbolic(2),
        HomogeneousSpace::Hyperbolic(3),
        HomogeneousSpace::Heisenberg(1),
        HomogeneousSpace::Heisenberg(2),
        HomogeneousSpace::Tree(2),
        HomogeneousSpace::Tree(3),
        HomogeneousSpace::Tree(4),
        HomogeneousSpace::Tree(9),
    ];
    let bound_grid = geometric(0.05, 50.0, 13);
    let mut failures = Vec::new();
    let mut min_slack = f64::INFINITY;
    for s in &spaces {
        match spectral_vs_heat_bound(s, &bound_grid) {
            Ok(r) => min_slack = min_slack.min(r.min_slack),
            Err(Error::BoundViolated { lambda, .. }) => failures.push(format!("{} at λ={lambda}", s.tag())),
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome {
        passed: worst_abs <= 1e-6 && failures.is_empty(),
        detail: format!(
            "heat transform max error {worst_abs:.1e} (relative {worst_rel:.1e}); M ≤ e·H(1/λ) on {} spaces × {} λ, \
             {} violations{}, min slack {min_slack:.2e}",
            spaces.len(),
            bound_grid.len(),
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(" ({})", failures.join(", ")) }
        ),
    })
}

fn swap_action(n: usize) -> Result<GroupAction> {
    let swap: Vec<usize> = (0..2 * n).map(|x| (x + n) % (2 * n)).collect();
    GroupAction::from_generators(FiniteGroup::cyclic(2)?, 2 * n, Some(swap), None)
}

fn double_cycle() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut contained = true;
    for n in [6usize, 12, 20] {
        let graph = WeightedGraph::double_cycle(n);
        let wave = |k: usize| 2.0 - 2.0 * (2.0 * PI * k as f64 / n as f64).cos();
        let mut even: Vec<f64> = (0..n).map(wave).collect();
        let mut odd: Vec<f64> = (0..n).map(|k| 2.0 + wave(k)).collect();
        even.sort_by(f64::total_cmp);
        odd.sort_by(f64::total_cmp);
        let mut all: Vec<f64> = even.iter().chain(&odd).copied().collect();
        all.sort_by(f64::total_cmp);
        let eig = laplacian_spectrum(&graph)?;
        for (a, b) in eig.eigenvalues().iter().zip(&all) {
            worst = worst.max((a - b).abs());
        }
        let counts = isotypic_counts(&SymmetricSystem::new(graph, swap_action(n)?)?)?;
        let mut got = [Vec::new(), Vec::new()];
        for level in &counts.levels {
            for (j, side) in got.iter_mut().enumerate() {
                side.extend(std::iter::repeat_n(level.lambda, level.per_irrep[j]));
            }
        }
        for (side, want) in got.iter().zip([&even, &odd]) {
            if side.len() != want.len() {
                return Ok(Outcome {
                    passed: false,
                    detail: format!("N={n}: {} eigenvalues in a parity class, expected {}", side.len(), want.len()),
                });
            }
            for (a, b) in side.iter().zip(want.iter()) {
                worst = worst.max((a - b).abs());
            }
        }
        contained &= got[0].iter().all(|&l| (-1e-10..=4.0 + 1e-10).contains(&l));
        contained &= got[1].iter().all(|&l| (2.0 - 1e-10..=6.0 + 1e-10).contains(&l));
    }
    Ok(Outcome {
        passed: worst <= 1e-10 && contained,
        detail: format!(
            "N ∈ {{6, 12, 20}}: max eigenvalue error {worst:.1e}; even ⊆ [0,4] and odd ⊆ [2,6]: {contained}"
        ),
    })
}

/// A random symmetric system for the boundary lemma, plus a family label.
fn random_system(rng: &mut SeededRng, family: usize) -> Result<(SymmetricSystem, &'static str)> {
    let dihedral = rng.below(2) == 1;
    let group = |k: usize| if dihedral { FiniteGroup::dihedral(k) } else { FiniteGroup::cyclic(k) };
    match family {
        0 => {
            // Circulant on ℤ_n with random jumps, acted on by a subgroup of rotations.
            let k = rng.int_in(2, 12) as usize;
            let n = k * rng.int_in(1, (24 / k) as i64) as usize;
            let mut edges = std::collections::BTreeMap::new();
            for s in 1..=n / 2 {
                if s == 1 || rng.below(3) == 0 {
                    let w = rng.uniform_in(0.5, 2.0);
                    for i in 0..n {
                        let (a, b) = (i, (i + s) % n);
                        edges.entry((a.min(b), a.max(b))).or_insert(w);
                    }
                }
            }
            let mu = rng.uniform_in(0.5, 2.0);
            let graph = WeightedGraph::new(vec![mu; n], edges.into_iter().map(|((a, b), w)| (a, b, w)).collect())?;
            let step = n / k;
            let r = (0..n).map(|i| (i + step) % n).collect();
            let s = dihedral.then(|| (0..n).map(|i| (n - i) % n).collect());
            let action = GroupAction::from_generators(group(k)?, n, Some(r), s)?;
            Ok((SymmetricSystem::new(graph, action)?, "circulant"))
        }
        1 => {
            // Cylinder C_k × P_m with layer-dependent weights and killing.
            let k = rng.int_in(3, 12) as usize;
            let m = rng.int_in(1, 5) as usize;
            let idx = |i: usize, p: usize| p * k + i;
            let mut edges = Vec::new();
            let mut mu = Vec::new();
            let mut kappa = Vec::new();
            for p in 0..m {
                let c = rng.uniform_in(0.5, 2.0);
                let layer_mu = rng.uniform_in(0.5, 2.0);
                let layer_kappa = if rng.below(3) == 0 { rng.uniform_in(0.0, 1.0) } else { 0.0 };
                for i in 0..k {
                    edges.push((idx(i, p), idx((i + 1) % k, p), c));
                }
                mu.extend(std::iter::repeat_n(layer_mu, k));
                kappa.extend(std::iter::repeat_n(layer_kappa, k));
                if p + 1 < m {
                    let d = rng.uniform_in(0.5, 2.0);
                    for i in 0..k {
                        edges.push((idx(i, p), idx(i, p + 1), d));
                    }
                }
            }
            let graph = WeightedGraph::new(mu, edges)?.with_killing(kappa)?;
            let n = k * m;
            let r = (0..n).map(|v| idx((v % k + 1) % k, v / k)).collect();
            let s = dihedral.then(|| (0..n).map(|v| idx((k - v % k) % k, v / k)).collect());
            let action = GroupAction::from_generators(group(k)?, n, Some(r), s)?;
            Ok((SymmetricSystem::new(graph, action)?, "cylinder"))
        }
        2 => {
            // Double cycle with random rung and ring conductances under the swap.
            let n = rng.int_in(3, 15) as usize;
            let (ring, rung) = (rng.uniform_in(0.5, 2.0), rng.uniform_in(0.5, 2.0));
            let mut edges = Vec::new();
            for j in 0..n {
                edges.push((j, (j + 1) % n, ring));
                edges.push((n + j, n + (j + 1) % n, ring));
                edges.push((j, n + j, rung));
            }
            let graph = WeightedGraph::new(vec![1.0; 2 * n], edges)?;
            Ok((SymmetricSystem::new(graph, swap_action(n)?)?, "double cycle"))
        }
        _ => {
            // Two copies of a random graph exchanged by ℤ₂, joined by a matching.
            let h = rng.int_in(3, 10) as usize;
            let mut edges = Vec::new();
            for a in 0..h {
                for b in a + 1..h {
                    if b == a + 1 || rng.below(3) == 0 {
                        let w = rng.uniform_in(0.5, 2.0);
                        edges.push((a, b, w));
                        edges.push((h + a, h + b, w));
                    }
                }
                if rng.below(2) == 0 {
                    edges.push((a, h + a, rng.uniform_in(0.5, 2.0)));
                }
            }
            let mu: Vec<f64> = (0..h).map(|_| rng.uniform_in(0.5, 2.0)).collect();
            let mu = mu.iter().chain(&mu).copied().collect();
            let graph = WeightedGraph::new(mu, edges)?;
            Ok((SymmetricSystem::new(graph, swap_action(h)?)?, "mirrored random graph"))
        }
    }
}

/// One random representative per orbit, then each other vertex with probability `p`.
fn random_domain(rng: &mut SeededRng, sys: &SymmetricSystem) -> Result<FundamentalDomain> {
    let n = sys.graph().n();
    let p = rng.uniform_in(0.0, 0.3);
    let mut seen = vec![false; n];
    let mut f = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let orbit = sys.action().orbit(x);
        for &y in &orbit {
            seen[y] = true;
        }
        f.push(orbit[rng.below(orbit.len() as u64) as usize]);
    }
    for x in 0..n {
        if !f.contains(&x) && rng.uniform() < p {
            f.push(x);
        }
    }
    FundamentalDomain::new(sys, &f)
}

fn boundary_lemma() -> Result<Outcome> {
    const TRIPLES: usize = 60;
    let mut rng = SeededRng::new(0x5eed_51);
    let mut violations = Vec::new();
    let mut max_ratio = 0.0f64;
    let mut levels = 0;
    for t in 0..TRIPLES {
        let (sys, family) = random_system(&mut rng, t % 4)?;
        let fd = random_domain(&mut rng, &sys)?;
        let counts = isotypic_counts(&sys)?;
        match lemma51_check(&counts, &fd, &[]) {
            Ok(r) => {
                max_ratio = max_ratio.max(r.max_ratio);
                levels += r.rows.len();
            }
            Err(Error::BoundViolated { lambda, .. }) => {
                violations.push(format!("#{t} {family} {} at λ={lambda:.4}", counts.group_name))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome {
        passed: violations.is_empty(),
        detail: format!(
            "{TRIPLES} random (graph, group, domain) triples, {levels} levels checked, {} violations{}, \
             max deviation/bound {max_ratio:.3}",
            violations.len(),
            if violations.is_empty() { String::new() } else { format!(" ({})", violations.join("; ")) }
        ),
    })
}

fn torus_d4() -> Result<Outcome> {
    let r = torus_d4_counts(4.0 * PI * PI * 1e4)?;
    Ok(Outcome {
        passed: r.violations == 0 && (r.envelope_slope - 0.5).abs() <= 0.1,
        detail: format!(
            "λ ≤ 4π²·10⁴: {} levels, {} violations, max deviation/bound {:.3}, envelope slope {:.3}",
            r.levels.len(),
            r.violations,
            r.max_ratio,
            r.envelope_slope
        ),
    })
}

fn sg_split() -> Result<Outcome> {
    // |N_E - 2N/3| stays within #G/2 = 3 at every level.
    const TWO_DIM_CONST: f64 = 3.0;
    let mut parts = Vec::new();
    let mut passed = true;
    for m in 3..=6 {
        let s = sg_splitting(m, BoundaryCondition::Neumann)?;
        let sums_ok = s.counts.levels.iter().all(|l| l.per_irrep.iter().sum::<usize>() == l.multiplicity);
        let one_dim_bound = 6.0 * s.boundary_size as f64;
        passed &= sums_ok && s.max_dev_two_dim <= TWO_DIM_CONST && s.max_dev_one_dim <= one_dim_bound;
        parts.push(format!(
            "Γ{m}: ΣN_j=N {sums_ok}, |N_E-2N/3| ≤ {:.3}, |N_1d-N/3| ≤ {:.3} vs 6·#∂F = {one_dim_bound}",
            s.max_dev_two_dim, s.max_dev_one_dim
        ));
    }
    Ok(Outcome {
        passed,
        detail: format!("Neumann; {}", parts.join("; ")),
    })
}

fn sg_weyl() -> Result<Outcome> {
    // Band of the Γ₆ Neumann ratio over its whole positive spectrum is [0.112, 0.335].
    const BAND: (f64, f64) = (0.1, 0.35);
    let fine = sg_weyl_ratio(6, BoundaryCondition::Neumann)?;
    let coarse = sg_weyl_ratio(5, BoundaryCondition::Neumann)?;
    let (lo, hi) = fine.band(0.0, f64::INFINITY);
    let (wlo, whi) = coarse.top_periods(2);
    let p = sg_weyl_periodicity(&coarse, &fine, wlo, whi);
    Ok(Outcome {
        passed: lo >= BAND.0 && hi <= BAND.1 && p.samples > 0 && p.max_rel_dev <= 0.05,
        detail: format!(
            "Γ6 Neumann ratio band [{lo:.4}, {hi:.4}]; r_Γ6(5λ) vs r_Γ5(λ) on [{wlo:.1}, {whi:.1}]: \
             max deviation {:.2}% over {} gaps",
            100.0 * p.max_rel_dev,
            p.samples
        ),
    })
}

fn covering() -> Result<Outcome> {
    let mut mismatches = 0;
    for n in 1..=16 {
        let cv = CircleCover::new(n)?;
        // Hits (2πk/N)² exactly for every 40th point.
        for i in 0..1000 {
            let lambda = (2.0 * PI * i as f64 / 40.0).powi(2);
            if cover_sum_circle(&cv, lambda)? != circle_mass(lambda)? {
                mismatches += 1;
            }
        }
    }
    let mut fejer = 0.0f64;
    let mut bounded = true;
    let mut max_partial = 0.0f64;
    for (lambda, gamma) in [(1.0, 100_000), (40.0, 1_000_000)] {
        let s = line_cover_partial_sums(lambda, gamma)?;
        fejer = fejer.max((s.final_fejer() - s.limit).abs());
        // (2/π)Σ sin(γθ)/γ lies in [0, 2Si(π)/π] and Si(π) < 1.852.
        bounded &= s.max_abs_partial() <= f64::sqrt(lambda) / PI + 2.0 * 1.852 / PI;
        max_partial = max_partial.max(s.max_abs_partial());
    }
    Ok(Outcome {
        passed: mismatches == 0 && fejer <= 1e-4 && bounded,
        detail: format!(
            "N ≤ 16 on 1000 λ: {mismatches} mismatches; Fejér error {fejer:.1e}; partial sums bounded: {bounded} \
             (max |S_Γ| = {max_partial:.4})"
        ),
    })
}

fn so2_splitting() -> Result<Outcome> {
    const R: f64 = 1e4;
    let mut masses = Vec::new();
    for lambda in [1.0, 4.0] {
        let row = (0..=8).map(|j| so2_component_mass(j, lambda, R)).collect::<Result<Vec<_>>>()?;
        masses.push(row);
    }
    let spread = |row: &[f64]| {
        let (lo, hi) = row.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        hi / lo - 1.0
    };
    let spread_max = spread(&masses[0]).max(spread(&masses[1]));
    let scaling = masses[0]
        .iter()
        .zip(&masses[1])
        .fold(0.0f64, |m, (a, b)| m.max((b / a / 2.0 - 1.0).abs()));
    let mean = masses[1].iter().sum::<f64>() / masses[1].len() as f64;
    Ok(Outcome {
        passed: spread_max <= 0.01 && scaling <= 0.01,
        detail: format!(
            "R = 1e4, j = 0..8: pairwise spread {:.3}%, √λ scaling error {:.3}%; λ=4 mean {mean:.5} \
             (√λ/π = {:.5}, √λ/2π² = {:.5})",
            100.0 * spread_max,
            100.0 * scaling,
            so2_asymptotic_limit(4.0),
            so2_printed_limit(4.0)
        ),
    })
}
