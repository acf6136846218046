//! One-dimensional numerics shared by the solvers: monotone bisection and a
//! grid-seeded golden-section maximizer.

use crate::error::{Error, Result};

pub const MAX_BISECTIONS: usize = 200;

/// Returns `inf { v in [lo, hi] : f(v) <= target }` for a non-increasing `f`
/// with `f(lo) > target` and `f(hi) <= target`.
///
/// Stops once the bracket no longer shrinks in floating point or after
/// [`MAX_BISECTIONS`] halvings; the returned point always satisfies
/// `f(v) <= target`.
pub fn bisect_decreasing<F>(f: F, target: f64, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Doubles `hi` from `start` until `f(hi) <= target`.
pub fn expand_upper<F>(f: F, target: f64, start: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let mut hi = start;
    for _ in 0..2048 {
        if f(hi) <= target {
            return Some(hi);
        }
        hi *= 2.0;
        if !hi.is_finite() {
            break;
        }
    }
    None
}

/// Settings for [`maximize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizeOptions {
    pub grid_points: usize,
    pub tol: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        MaximizeOptions {
            grid_points: 101,
            tol: 1e-4,
        }
    }
}

/// Golden-section refinement needs this many iterations to shrink `width` to `tol`.
fn golden_iterations(width: f64, tol: f64) -> usize {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if width <= tol {
        return 0;
    }
    ((tol / width).ln() / INV_PHI.ln()).ceil() as usize
}

/// Maximizes `f` over `[lo, hi]`.
///
/// Evaluates a uniform grid first so corner solutions and secondary modes are
/// not missed, then runs golden-section search on the two cells around the
/// best grid point. Non-finite objective values count as infeasible. On exact
/// ties the smallest argument wins.
pub fn maximize<F>(f: F, lo: f64, hi: f64, opts: MaximizeOptions) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let score = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };
    if !(hi >= lo) {
        return Err(Error::NoFeasibleCandidate { lo, hi });
    }
    if hi == lo {
        let v = score(lo);
        return if v.is_finite() {
            Ok((lo, v))
        } else {
            Err(Error::NoFeasibleCandidate { lo, hi })
        };
    }
    let n = opts.grid_points.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| score(x)).collect();
    let mut best = 0;
    for i in 1..n {
        if values[i] > values[best] {
            best = i;
        }
    }
    if !values[best].is_finite() {
        return Err(Error::NoFeasibleCandidate { lo, hi });
    }

    let a0 = grid[best.saturating_sub(1)];
    let b0 = grid[(best + 1).min(n - 1)];
    let (mut a, mut b) = (a0, b0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = score(c);
    let mut fd = score(d);
    for _ in 0..golden_iterations(b - a, opts.tol) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(d);
        }
    }
    let mid = 0.5 * (a + b);
    let candidates = [
        (grid[best], values[best]),
        (mid, score(mid)),
        (c, fc),
        (d, fd),
        (a0, score(a0)),
    ];
    let mut out = candidates[0];
    for &(x, v) in &candidates[1..] {
        if v > out.1 || (v == out.1 && x < out.0) {
            out = (x, v);
        }
    }
    Ok(out)
}
