//! Bessel functions of the first kind `J_n(x)` for integer order.
//!
//! Power series below `x = 12`, Miller's downward recurrence normalised by
//! `J_0 + 2 Σ J_{2k} = 1` above it, and the Hankel expansion for very
//! large arguments where the recurrence would need thousands of steps.

use std::f64::consts::PI;

const SERIES_MAX_X: f64 = 12.0;
const HANKEL_MIN_X: f64 = 1000.0;
const HANKEL_MAX_ORDER: u32 = 50;
const RESCALE: f64 = 1e250;

/// `J_order(x)`. Negative `x` uses `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(order, -x);
        return if order % 2 == 1 { -v } else { v };
    }
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if x < SERIES_MAX_X {
        series(order, x)
    } else if x >= HANKEL_MIN_X && order <= HANKEL_MAX_ORDER {
        hankel(order, x)
    } else {
        miller(order, x)[order as usize]
    }
}

/// `[J_0(x), J_1(x), ..., J_max_order(x)]` from one recurrence pass.
pub fn bessel_j_upto(max_order: u32, x: f64) -> Vec<f64> {
    if x < 0.0 {
        let mut v = bessel_j_upto(max_order, -x);
        for (k, val) in v.iter_mut().enumerate() {
            if k % 2 == 1 {
                *val = -*val;
            }
        }
        return v;
    }
    if x == 0.0 || x < SERIES_MAX_X {
        return (0..=max_order).map(|n| bessel_j(n, x)).collect();
    }
    if x >= HANKEL_MIN_X && (max_order as f64) < 0.5 * x {
        // Upward recurrence is stable while the order stays below x.
        let mut out = Vec::with_capacity(max_order as usize + 1);
        out.push(hankel(0, x));
        if max_order >= 1 {
            out.push(hankel(1, x));
        }
        for k in 1..max_order as usize {
            let next = 2.0 * k as f64 / x * out[k] - out[k - 1];
            out.push(next);
        }
        return out;
    }
    let mut v = miller(max_order, x);
    v.truncate(max_order as usize + 1);
    v
}

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut m = 0u32;
    loop {
        m += 1;
        term *= -q / (m as f64 * (m + order) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && m as f64 > half {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    sum
}

/// Miller's algorithm: returns `J_0..=J_N` for some `N >= order`.
fn miller(order: u32, x: f64) -> Vec<f64> {
    let top = (order as f64).max(x);
    let mut start = (top + 30.0 + 12.0 * top.sqrt()) as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut vals = vec![0.0f64; start + 2];
    vals[start] = 1e-30;
    for k in (1..=start).rev() {
        vals[k - 1] = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > RESCALE {
            for v in vals[k - 1..].iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    let mut norm = vals[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * vals[k];
    }
    vals.truncate(start + 1);
    for v in vals.iter_mut() {
        *v /= norm;
    }
    vals
}

fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order as f64) * (order as f64);
    let z8 = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (k as f64 * z8);
        if a.abs() > prev {
            // Asymptotic series started diverging.
            break;
        }
        prev = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 30-digit arbitrary-precision evaluation.
    const REFERENCE: &[(u32, f64, f64)] = &[
        (0, 1.0, 0.76519768655796655145),
        (1, 1.0, 0.44005058574493351596),
        (0, 5.5, -0.006843869417819196824),
        (2, 11.9, -0.063534021474702930493),
        (3, 12.1, 0.18092987885069796201),
        (5, 30.0, -0.14324029551207707699),
        (0, 100.0, 0.019985850304223122424),
        (1, 250.5, -0.050371040190527661183),
        (8, 999.0, 0.017947352556275040925),
        (20, 15.0, 0.0073602340792234852583),
        (7, 1500.0, 0.01313191882769751723),
        (0, 20000.0, 0.0055659749049549461571),
        (3, 7.25, -0.21924533340150819107),
        (12, 3.0, 2.2757254483205719769e-7),
        (40, 60.0, -0.077646197404715064971),
    ];

    #[test]
    fn matches_reference_values() {
        for &(n, x, want) in REFERENCE {
            let got = bessel_j(n, x);
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1e-3),
                "J_{n}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(1, 0.0), 0.0);
    }

    #[test]
    fn first_zero_of_j0() {
        // Oracle: bisection on the series alone.
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if series(0, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 2.404825557695773).abs() < 1e-14);
        assert!(bessel_j(0, 2.404825557695773).abs() < 1e-9);
    }

    #[test]
    fn branches_agree_at_switch_points() {
        for n in [0u32, 1, 4, 9] {
            let x = SERIES_MAX_X;
            let (s, m) = (series(n, x), miller(n, x)[n as usize]);
            assert!((s - m).abs() < 1e-12, "order {n}: {s} vs {m}");
            let x = HANKEL_MIN_X;
            let (h, m) = (hankel(n, x), miller(n, x)[n as usize]);
            assert!((h - m).abs() < 1e-13, "order {n}: {h} vs {m}");
        }
    }

    #[test]
    fn recurrence_holds() {
        for j in 1..=20u32 {
            for i in 0..=99 {
                let x = 0.5 + i as f64 * 0.5;
                let lhs = bessel_j(j - 1, x) + bessel_j(j + 1, x);
                let rhs = 2.0 * j as f64 / x * bessel_j(j, x);
                assert!((lhs - rhs).abs() < 1e-8, "j={j} x={x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn sequence_matches_single_evaluations() {
        for x in [0.3, 8.0, 40.0, 2500.0, -3.0] {
            let seq = bessel_j_upto(10, x);
            for (n, v) in seq.iter().enumerate() {
                assert!((v - bessel_j(n as u32, x)).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }
}
