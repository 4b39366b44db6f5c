//! Globally adaptive Simpson quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 200_000,
        }
    }
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let q = Quadrature {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_tol(tol: f64) -> Self {
        Quadrature {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_subdivisions >= 1) {
            return Err(Error::InvalidInput(format!(
                "quadrature needs abs_tol > 0, rel_tol > 0, max_subdivisions >= 1 (got {self:?})"
            )));
        }
        Ok(())
    }
}

/// One Simpson panel `[a, b]` with the five samples needed for the
/// two-level estimate.
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fl: f64,
    fm: f64,
    fr: f64,
    fb: f64,
    value: f64,
    error: f64,
}

impl Panel {
    fn new(a: f64, b: f64, fa: f64, fl: f64, fm: f64, fr: f64, fb: f64) -> Self {
        let h = b - a;
        let coarse = h / 6.0 * (fa + 4.0 * fm + fb);
        let fine = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
        let diff = fine - coarse;
        Panel {
            a,
            b,
            fa,
            fl,
            fm,
            fr,
            fb,
            value: fine + diff / 15.0,
            error: diff.abs(),
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` so that the result `I` satisfies
/// `|I - ∫f| <= max(abs_tol, rel_tol * |I|)` (as estimated by the
/// Simpson/refined-Simpson difference of every panel).
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, q: &Quadrature) -> Result<f64> {
    integrate_panels(f, &[a, b], q)
}

/// Like [`integrate`], but starts from the panels delimited by the
/// increasing `breaks`. Use it to resolve kinks, jumps, or oscillations
/// the initial samples could otherwise miss.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    q: &Quadrature,
) -> Result<f64> {
    q.validate()?;
    if breaks.len() < 2 {
        return Err(Error::InvalidInput("integration needs at least two breakpoints".into()));
    }
    if breaks.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidInput(format!(
            "integration breakpoints must be nondecreasing: {breaks:?}"
        )));
    }

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let h = b - a;
        let p = Panel::new(
            a,
            b,
            f(a),
            f(a + 0.25 * h),
            f(a + 0.5 * h),
            f(a + 0.75 * h),
            f(b),
        );
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    let mut splits = 0usize;
    loop {
        if !total.is_finite() {
            return Err(Error::NonConvergent(format!(
                "integrand produced a non-finite value on [{}, {}]",
                breaks[0],
                breaks[breaks.len() - 1]
            )));
        }
        let target = q.abs_tol.max(q.rel_tol * total.abs());
        if total_err <= target {
            return Ok(total);
        }
        let Some(p) = heap.pop() else {
            return Ok(total);
        };
        let m = 0.5 * (p.a + p.b);
        if !(p.a < m && m < p.b) || splits >= q.max_subdivisions {
            if splits >= q.max_subdivisions {
                return Err(Error::NonConvergent(format!(
                    "quadrature budget of {} subdivisions exhausted on [{}, {}] (error estimate {:e} > {:e})",
                    q.max_subdivisions,
                    breaks[0],
                    breaks[breaks.len() - 1],
                    total_err,
                    target
                )));
            }
            // Panel at floating-point resolution: accept it as is.
            total_err -= p.error;
            continue;
        }
        splits += 1;
        let hl = m - p.a;
        let hr = p.b - m;
        let left = Panel::new(p.a, m, p.fa, f(p.a + 0.25 * hl), p.fl, f(p.a + 0.75 * hl), p.fm);
        let right = Panel::new(m, p.b, p.fm, f(m + 0.25 * hr), p.fr, f(m + 0.75 * hr), p.fb);
        total += left.value + right.value - p.value;
        total_err += left.error + right.error - p.error;
        heap.push(left);
        heap.push(right);
    }
}
