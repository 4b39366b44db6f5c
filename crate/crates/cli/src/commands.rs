//! One function per subcommand, each producing CSV rows plus stderr notes.

use rayon::prelude::*;
use spectramass::covering::{circle_mass, cover_sum_detail, line_cover_partial_sums, CircleCover};
use spectramass::domains::{cube_family_mass, halfline_mass, BoundaryCondition, CubeFamily};
use spectramass::fractal_sg::{build_sg, sg_decimation_check, sg_spectrum, sg_splitting, sg_weyl_ratio};
use spectramass::graph_symmetry::{isotypic_counts, lemma51_check, load_system, torus_d4_counts, IsotypicCount};
use spectramass::homogeneous::{
    heat_closed_form, heat_transform, lattice_mass_estimate, spectral_vs_heat_bound, HomogeneousSpace,
    SpectralMassCurve,
};
use spectramass::lie_symmetry::{
    product_counts, product_total, so2_asymptotic_limit, so2_component_mass, so2_printed_limit, BaseCounts,
    ProductSpectrum,
};
use spectramass::verify::{run_criterion, CRITERIA};
use spectramass::Error;

use crate::grid::{parse_grid, parse_int_grid};
use crate::output::Row;
use crate::{CliError, Command, Space, SpaceArgs};

/// Rows for the CSV, notes for stderr, and an optional failed check.
#[derive(Debug, Default)]
pub struct Report {
    pub rows: Vec<Row>,
    pub notes: Vec<String>,
    pub failure: Option<String>,
}

impl Report {
    fn rows(rows: Vec<Row>) -> Self {
        Report {
            rows,
            ..Default::default()
        }
    }
}

fn grid(s: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(s).map_err(CliError::Usage)
}

/// Evaluates `f` at every grid point on the current pool; rows come back in grid order.
fn par_rows<F>(grid: &[f64], f: F) -> Result<Vec<Row>, CliError>
where
    F: Fn(f64) -> Result<Vec<Row>, Error> + Sync,
{
    let chunks: Vec<Result<Vec<Row>, Error>> = grid.par_iter().map(|&l| f(l)).collect();
    let mut rows = Vec::new();
    for c in chunks {
        rows.extend(c?);
    }
    Ok(rows)
}

fn space_of(a: &SpaceArgs) -> Result<HomogeneousSpace, CliError> {
    let s = match a.space {
        Space::Euclidean => HomogeneousSpace::Euclidean(a.dim),
        Space::Lattice => HomogeneousSpace::Lattice(a.dim),
        Space::Hyperbolic => HomogeneousSpace::Hyperbolic(a.dim),
        Space::Heisenberg => HomogeneousSpace::Heisenberg(a.dim),
        Space::Tree => HomogeneousSpace::Tree(
            u32::try_from(a.dim).map_err(|_| CliError::Usage(format!("tree branching {} is too large", a.dim)))?,
        ),
    };
    s.validate()?;
    Ok(s)
}

pub fn dispatch(cmd: &Command, seed: u64) -> Result<Report, CliError> {
    match cmd {
        Command::Mass { space, lambda } => mass(space, lambda, seed),
        Command::Halfline { lambda, r, bc } => {
            let bc = BoundaryCondition::from(*bc);
            let rows = par_rows(&grid(lambda)?, |l| Ok(vec![Row::exact(l, halfline_mass(l, *r, bc)?, bc.name())]))?;
            Ok(Report::rows(rows))
        }
        Command::Cubes {
            lambda,
            p,
            count,
            dim,
            bc,
        } => {
            let fam = CubeFamily::power_law(*count, *p, (*bc).into(), *dim)?;
            let rows = par_rows(&grid(lambda)?, |l| {
                let a = cube_family_mass(&fam, l, *count)?;
                Ok(vec![Row::exact(l, a.m_plus, "m_plus"), Row::exact(l, a.m_minus, "m_minus")])
            })?;
            Ok(Report::rows(rows))
        }
        Command::Split { graph, lambda } => split(graph, lambda.as_deref()),
        Command::Torus { lambda_max } => torus(*lambda_max),
        Command::Sg {
            level,
            bc,
            weyl,
            split,
            decimation,
        } => sg(*level, (*bc).into(), *weyl, *split, *decimation),
        Command::Cover {
            lambda,
            sheets,
            line,
            gamma,
        } => cover(&grid(lambda)?, *sheets, *line, *gamma),
        Command::So2 { lambda, j, r } => so2(&grid(lambda)?, j, *r),
        Command::Product {
            lambda,
            levels,
            base_c,
            base_beta,
            base_eigs,
        } => {
            let base = match base_eigs {
                Some(s) => BaseCounts::Steps(grid(s)?),
                None => BaseCounts::PowerLaw {
                    c: *base_c,
                    beta: *base_beta,
                },
            };
            let ps = ProductSpectrum::su2(*levels, base)?;
            let rows = par_rows(&grid(lambda)?, |l| {
                let mut out = Vec::with_capacity(*levels + 1);
                for j in 0..*levels {
                    out.push(Row::exact(l, product_counts(&ps, j, l)?, format!("d={}", j + 1)));
                }
                out.push(Row::exact(l, product_total(&ps, l), "total"));
                Ok(out)
            })?;
            Ok(Report::rows(rows))
        }
        Command::Heat { space, t, lambda } => heat(space, t.as_deref(), lambda.as_deref()),
        Command::Verify { only } => verify(only.as_deref()),
    }
}

fn mass(a: &SpaceArgs, lambda: &str, seed: u64) -> Result<Report, CliError> {
    let space = space_of(a)?;
    let tag = space.tag();
    let rows = par_rows(&grid(lambda)?, |l| {
        let e = match space {
            HomogeneousSpace::Lattice(n) => lattice_mass_estimate(n, l, seed)?,
            _ => space.mass(l)?,
        };
        Ok(vec![Row::new(l, e.value, tag.clone(), e.err_est)])
    })?;
    Ok(Report::rows(rows))
}

fn count_rows(counts: &IsotypicCount, lambda: f64) -> Vec<Row> {
    let mut rows: Vec<Row> = counts
        .irreps
        .iter()
        .zip(counts.counts(lambda))
        .map(|(irrep, n)| Row::exact(lambda, n as f64, irrep.name.clone()))
        .collect();
    rows.push(Row::exact(lambda, counts.total(lambda) as f64, "total"));
    rows
}

fn split(path: &std::path::Path, lambda: Option<&str>) -> Result<Report, CliError> {
    let loaded = load_system(path)?;
    let counts = isotypic_counts(&loaded.system)?;
    let points: Vec<f64> = match lambda {
        Some(g) => grid(g)?,
        None => counts.levels.iter().map(|l| l.lambda).collect(),
    };
    let mut report = Report::default();
    for &l in &points {
        report.rows.extend(count_rows(&counts, l));
    }
    report
        .notes
        .push(format!("group {} of order {}, {} levels", counts.group_name, counts.group_order, counts.levels.len()));
    if let Some(fd) = &loaded.domain {
        match lemma51_check(&counts, fd, &points) {
            Ok(r) => report.notes.push(format!(
                "#∂F = {}, bound_rhs = {:?}, max deviation/bound {:.4}",
                r.boundary_size, r.bound_rhs, r.max_ratio
            )),
            Err(e @ Error::BoundViolated { .. }) => report.failure = Some(e.to_string()),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}

fn torus(lambda_max: f64) -> Result<Report, CliError> {
    let r = torus_d4_counts(lambda_max)?;
    let mut report = Report::default();
    for level in &r.levels {
        for (name, &n) in r.irrep_names.iter().zip(&level.per_irrep) {
            report.rows.push(Row::exact(level.lambda, n as f64, name.clone()));
        }
        report.rows.push(Row::exact(level.lambda, level.total as f64, "total"));
        report.rows.push(Row::exact(level.lambda, level.boundary as f64, "boundary"));
    }
    report.notes.push(format!(
        "{} levels, {} violations, max deviation/bound {:.4}, envelope slope {:.3}",
        r.levels.len(),
        r.violations,
        r.max_ratio,
        r.envelope_slope
    ));
    for o in &r.orbit_splits {
        report.notes.push(format!(
            "orbit of {:?} (size {}): multiplicities {:?}",
            o.representative, o.orbit_size, o.multiplicities
        ));
    }
    if r.violations > 0 {
        report.failure = Some(format!("{} torus bound violations", r.violations));
    }
    Ok(report)
}

fn sg(level: usize, bc: BoundaryCondition, weyl: bool, split: bool, decimation: bool) -> Result<Report, CliError> {
    let mut report = Report::default();
    if weyl {
        let c = sg_weyl_ratio(level, bc)?;
        for p in &c.points {
            report.rows.push(Row::exact(p.lambda, p.ratio, "ratio"));
        }
        let (lo, hi) = c.band(0.0, f64::INFINITY);
        let (wlo, whi) = c.top_periods(2);
        let (tlo, thi) = c.band(wlo, whi);
        report.notes.push(format!(
            "Weyl ratio band [{lo:.4}, {hi:.4}]; over the top two periods [{wlo:.1}, {whi:.1}]: [{tlo:.4}, {thi:.4}]"
        ));
    } else if split {
        let s = sg_splitting(level, bc)?;
        for l in &s.counts.levels {
            report.rows.extend(count_rows(&s.counts, l.lambda));
        }
        report.notes.push(format!(
            "#∂F = {}, max |N_E - 2N/3| = {:.4}, max |N_1d - N/3| = {:.4}, {} of {} triples with two E members",
            s.boundary_size,
            s.max_dev_two_dim,
            s.max_dev_one_dim,
            s.good_triples(),
            s.triples.len()
        ));
    } else if decimation {
        if bc != BoundaryCondition::Dirichlet {
            return Err(CliError::Usage("--decimation compares Dirichlet spectra; pass --bc dirichlet".into()));
        }
        let d = sg_decimation_check(level)?;
        for &u in &d.unmatched {
            report.rows.push(Row::exact(u, 1.0, "unmatched"));
        }
        for &e in &d.exceptional {
            report.rows.push(Row::exact(e, 1.0, "exceptional"));
        }
        report.notes.push(format!(
            "Γ{} → Γ{}: {:.2}% of eigenvalues match under λ(5 - λ), exceptional values {:?}",
            d.level,
            d.level + 1,
            100.0 * d.match_fraction,
            d.exceptional
        ));
        if !d.unmatched.is_empty() {
            report.failure = Some(format!("{} eigenvalues without a decimation partner", d.unmatched.len()));
        }
    } else {
        let g = build_sg(level, bc)?;
        let eig = sg_spectrum(&g)?;
        for c in eig.clusters() {
            let mean = eig.eigenvalues()[c.clone()].iter().sum::<f64>() / c.len() as f64;
            report.rows.push(Row::exact(mean, c.end as f64, "count"));
        }
        report
            .notes
            .push(format!("Γ{level} ({}): {} vertices in the operator", bc.name(), eig.n()));
    }
    Ok(report)
}

fn cover(grid: &[f64], sheets: u64, line: bool, gamma: usize) -> Result<Report, CliError> {
    if line {
        let rows = par_rows(grid, |l| {
            let s = line_cover_partial_sums(l, gamma)?;
            let last = *s.partial.last().expect("Γ = 0 term");
            Ok(vec![
                Row::new(l, last, "partial", (last - s.limit).abs()),
                Row::new(l, s.final_fejer(), "fejer", (s.final_fejer() - s.limit).abs()),
                Row::exact(l, s.max_abs_partial(), "max_abs_partial"),
                Row::exact(l, s.limit, "limit"),
            ])
        })?;
        return Ok(Report::rows(rows));
    }
    let cv = CircleCover::new(sheets)?;
    let rows = par_rows(grid, |l| {
        let d = cover_sum_detail(&cv, l)?;
        Ok(vec![
            Row::new(l, d.total, "cover_sum", d.residual),
            Row::exact(l, d.identity_term, "identity_term"),
            Row::exact(l, circle_mass(l)?, "circle_mass"),
        ])
    })?;
    let mut report = Report::rows(rows);
    let mismatches = report
        .rows
        .chunks(3)
        .filter(|c| c[0].value != c[2].value)
        .count();
    if mismatches > 0 {
        report.failure = Some(format!("cover sum differs from the circle mass at {mismatches} points"));
    }
    Ok(report)
}

fn so2(grid: &[f64], js: &str, r: f64) -> Result<Report, CliError> {
    let js = parse_int_grid(js).map_err(CliError::Usage)?;
    let rows = par_rows(grid, |l| {
        js.iter()
            .map(|&j| Ok(Row::exact(l, so2_component_mass(j, l, r)?, format!("j={j}"))))
            .collect()
    })?;
    let mut report = Report::rows(rows);
    for &l in grid {
        report.notes.push(format!(
            "λ = {l}: √λ/π = {:.6}, √λ/2π² = {:.6}",
            so2_asymptotic_limit(l),
            so2_printed_limit(l)
        ));
    }
    Ok(report)
}

fn heat(a: &SpaceArgs, t: Option<&str>, lambda: Option<&str>) -> Result<Report, CliError> {
    let space = space_of(a)?;
    let mut report = Report::default();
    if let Some(t) = t {
        let ts = grid(t)?;
        let curve = if heat_closed_form(&space, 1.0).is_some() {
            None
        } else {
            // Geometric grid from 1e-8 to the top of the spectrum or far beyond 1/t.
            let tmin = ts.iter().cloned().fold(f64::INFINITY, f64::min);
            if !(tmin > 0.0) {
                return Err(CliError::Usage("heat times must be positive".into()));
            }
            let hi = space.spectrum_top().unwrap_or(60.0 / tmin);
            let mut pts = vec![1e-8f64];
            while pts[pts.len() - 1] < hi {
                pts.push((pts[pts.len() - 1] * 1.002).min(hi));
            }
            Some(SpectralMassCurve::sample(&space, &pts)?)
        };
        for &tt in &ts {
            let (value, component) = match &curve {
                Some(c) => (heat_transform(c, tt)?, "heat_transform"),
                None => (heat_closed_form(&space, tt).expect("closed form"), "heat_closed_form"),
            };
            report.rows.push(Row::exact(tt, value, component));
        }
        report.notes.push("lambda column holds t".into());
    }
    if let Some(l) = lambda {
        match spectral_vs_heat_bound(&space, &grid(l)?) {
            Ok(r) => {
                for row in &r.rows {
                    report.rows.push(Row::exact(row.lambda, row.mass, "mass"));
                    report.rows.push(Row::exact(row.lambda, row.rhs, "e_heat"));
                }
                report.notes.push(format!("M ≤ e·h(1/λ) holds, min slack {:.3e}", r.min_slack));
            }
            Err(e @ Error::BoundViolated { .. }) => report.failure = Some(e.to_string()),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}

fn verify(only: Option<&str>) -> Result<Report, CliError> {
    let ids: Vec<usize> = match only {
        Some(s) => parse_int_grid(s)
            .map_err(CliError::Usage)?
            .into_iter()
            .map(|i| usize::try_from(i).map_err(|_| CliError::Usage(format!("no criterion {i}"))))
            .collect::<Result<_, _>>()?,
        None => (1..=CRITERIA.len()).collect(),
    };
    let mut report = Report::default();
    let mut failed = Vec::new();
    for id in ids {
        let r = run_criterion(id)?;
        eprintln!("{}", r.line());
        report
            .rows
            .push(Row::exact(id as f64, if r.passed { 1.0 } else { 0.0 }, r.name));
        if !r.passed {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        report.failure = Some(format!("criteria {failed:?} failed"));
    }
    Ok(report)
}
