use alloc::vec::Vec;

use super::Ball;
use crate::{Error, Result};

/// Difference quotient `(f(x) - f(y)) / (x - y)`.
pub fn diff_quotient<F>(f: F, x: f64, y: f64) -> Result<Ball>
where
    F: Fn(f64) -> Ball,
{
    if x == y {
        return Err(Error::Diagonal);
    }
    let num = f(x) - f(y);
    let den = Ball::exact(x) - Ball::exact(y);
    Ok(num / den)
}

/// Result of a monotone inversion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inverse {
    pub x: f64,
    /// `lo <= x <= hi`; when `certified`, `f(lo) <= y <= f(hi)` holds for the exact `f`.
    pub lo: f64,
    pub hi: f64,
    pub certified: bool,
    pub iterations: u32,
}

impl Inverse {
    /// The enclosure as a ball.
    pub fn ball(&self) -> Ball {
        Ball::from_interval(self.lo, self.hi)
    }
}

const MAX_BISECT: u32 = 4096;

/// Bisection inverse of a strictly increasing `f` on `bracket`.
///
/// Stops when `|f(x) - y| <= tol + radius(f(x))`. The returned enclosure is widened
/// outward until both ends are certified on the correct side of `y`, so
/// `[lo, hi]` contains the exact preimage whenever `certified` is set.
pub fn invert_monotone<F>(f: F, y: f64, bracket: (f64, f64), tol: f64) -> Result<Inverse>
where
    F: Fn(f64) -> Ball,
{
    let (mut lo, mut hi) = bracket;
    if !(lo <= hi) {
        return Err(Error::NoBracket);
    }
    let yb = Ball::exact(y);
    let flo = f(lo);
    let fhi = f(hi);
    if flo.certainly_lt(&yb) && fhi.certainly_lt(&yb) || yb.certainly_lt(&flo) && yb.certainly_lt(&fhi) {
        return Err(Error::NoBracket);
    }
    if yb.certainly_lt(&flo) || fhi.certainly_lt(&yb) {
        return Err(Error::NoBracket);
    }
    let mut left_ok = flo.certainly_lt(&yb);
    let mut right_ok = yb.certainly_lt(&fhi);
    let mut it = 0;
    let mut x = 0.5 * lo + 0.5 * hi;
    let mut hit = false;
    while it < MAX_BISECT {
        it += 1;
        let m = 0.5 * lo + 0.5 * hi;
        if m <= lo || m >= hi {
            if left_ok && right_ok {
                // Adjacent floats with f certified below and above y: f jumps over y
                // within one ulp, and the bracket itself is the enclosure.
                return Ok(Inverse { x: lo, lo, hi, certified: true, iterations: it });
            }
            x = m;
            break;
        }
        let v = f(m);
        x = m;
        if (v.center - y).abs() <= tol + v.radius && hi - lo <= tol.max(f64::EPSILON * m.abs()) {
            hit = true;
            break;
        }
        if v.certainly_lt(&yb) {
            lo = m;
            left_ok = true;
        } else if yb.certainly_lt(&v) {
            hi = m;
            right_ok = true;
        } else {
            // Undecided under outward rounding: y lies in the enclosure of f(m).
            hit = true;
            break;
        }
    }
    let v = f(x);
    if !hit && (v.center - y).abs() > tol + v.radius {
        return Err(Error::Stall);
    }
    // Tighten the enclosure around x with certified sides.
    let (elo, eok_l) = certify_side(&f, x, lo, yb, true);
    let (ehi, eok_r) = certify_side(&f, x, hi, yb, false);
    let lo = if eok_l { elo } else { lo };
    let hi = if eok_r { ehi } else { hi };
    Ok(Inverse {
        x,
        lo,
        hi,
        certified: (eok_l || left_ok) && (eok_r || right_ok),
        iterations: it,
    })
}

/// Walk from `x` towards `limit` with doubling steps until `f` is certified on the
/// required side of `y`.
fn certify_side<F>(f: &F, x: f64, limit: f64, y: Ball, left: bool) -> (f64, bool)
where
    F: Fn(f64) -> Ball,
{
    let mut step = f64::EPSILON * x.abs().max(f64::MIN_POSITIVE);
    for _ in 0..1100 {
        let p = if left { x - step } else { x + step };
        let p = if left { p.max(limit) } else { p.min(limit) };
        let v = f(p);
        let ok = if left { v.certainly_lt(&y) } else { y.certainly_lt(&v) };
        if ok {
            return (p, true);
        }
        if p == limit {
            return (p, false);
        }
        step *= 2.0;
    }
    (limit, false)
}

/// Difference quotients of `f` at `x` at each scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuotientSample {
    pub scale: f64,
    pub forward: Ball,
    pub backward: Ball,
    pub symmetric: Ball,
}

pub fn derivative_estimate<F>(f: F, x: f64, scales: &[f64]) -> Result<Vec<QuotientSample>>
where
    F: Fn(f64) -> Ball,
{
    check_decreasing(scales)?;
    let fx = f(x);
    let xb = Ball::exact(x);
    let mut out = Vec::with_capacity(scales.len());
    for &h in scales {
        let hb = Ball::exact(h);
        let xp = xb + hb;
        let xm = xb - hb;
        // The evaluation points are rounded; divide by the rounded offsets actually used.
        let (p, m) = (xp.center, xm.center);
        let fp = f(p);
        let fm = f(m);
        let dp = Ball::exact(p) - xb;
        let dm = xb - Ball::exact(m);
        let d2 = Ball::exact(p) - Ball::exact(m);
        out.push(QuotientSample {
            scale: h,
            forward: (fp - fx) / dp,
            backward: (fx - fm) / dm,
            symmetric: (fp - fm) / d2,
        });
    }
    Ok(out)
}

pub(crate) fn check_decreasing(scales: &[f64]) -> Result<()> {
    if scales.is_empty() || scales.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return Err(Error::BadScales);
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::BadScales);
    }
    Ok(())
}

/// Certified lower bound on the oscillation of the sampled `f` over `(x - δ, x + δ)` at the
/// smallest δ, using `density` uniformly spaced interior points plus `x`.
pub fn oscillation<F>(f: F, x: f64, deltas: &[f64], density: usize) -> Result<f64>
where
    F: Fn(f64) -> Ball,
{
    check_decreasing(deltas)?;
    let d = *deltas.last().unwrap_or(&0.0);
    let n = density.max(2);
    let mut lo_max = f64::NEG_INFINITY;
    let mut hi_min = f64::INFINITY;
    let mut visit = |v: Ball| {
        lo_max = lo_max.max(v.lo());
        hi_min = hi_min.min(v.hi());
    };
    visit(f(x));
    for i in 1..n {
        let t = -1.0 + 2.0 * (i as f64) / (n as f64);
        let p = x + d * t;
        if p > x - d && p < x + d {
            visit(f(p));
        }
    }
    Ok((lo_max - hi_min).max(0.0))
}

/// Grid scan for a certified sign change of `f - y` on `[a, b]`, then bisection.
///
/// `None` only means nothing was found at this grid.
pub fn ivp_probe<F>(f: F, a: f64, b: f64, y: f64, grid: usize) -> Option<f64>
where
    F: Fn(f64) -> Ball,
{
    if !(a < b) || grid == 0 {
        return None;
    }
    let yb = Ball::exact(y);
    let point = |i: usize| if i == grid { b } else { a + (b - a) * (i as f64) / (grid as f64) };
    let tol = (b - a) / (grid as f64) * 1e-9;
    let mut prev_x = a;
    let mut prev = f(a);
    if prev.contains(y) && (prev.center - y).abs() <= tol + prev.radius {
        return Some(a);
    }
    for i in 1..=grid {
        let xi = point(i);
        let v = f(xi);
        if v.contains(y) && (v.center - y).abs() <= tol + v.radius {
            return Some(xi);
        }
        let up = prev.certainly_lt(&yb) && yb.certainly_lt(&v);
        let down = yb.certainly_lt(&prev) && v.certainly_lt(&yb);
        if up || down {
            let (mut lo, mut hi) = (prev_x, xi);
            for _ in 0..200 {
                let m = 0.5 * lo + 0.5 * hi;
                if m <= lo || m >= hi || hi - lo <= tol {
                    break;
                }
                let fm = f(m);
                let below = fm.certainly_lt(&yb);
                let above = yb.certainly_lt(&fm);
                if !below && !above {
                    return Some(m);
                }
                if below == up {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            return Some(0.5 * lo + 0.5 * hi);
        }
        prev = v;
        prev_x = xi;
    }
    None
}
