use alloc::vec::Vec;

use super::sampled::SampledFunction;
use crate::evalcore::Rational;
use crate::{Error, Result};

/// Components of `{x in [a, b) : g(x) < g(y) for some y in (x, b]}` for the
/// piecewise-linear model of `g`. A component containing `a` is reported as `(a, d)`.
pub fn rising_sun(g: &SampledFunction, a: &Rational, b: &Rational) -> Result<Vec<(Rational, Rational)>> {
    if a >= b {
        return Err(Error::EmptyInterval);
    }
    Ok(rising_sun_points(&g.model(a, b)?))
}

/// Same, on explicit breakpoints `(x_i, v_i)` with strictly increasing `x_i`.
///
/// Right-to-left scan: on `[x_i, x_{i+1})` a point is shadowed iff its value is
/// below `max_{j > i} v_j`.
pub fn rising_sun_points(pts: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let n = pts.len();
    if n < 2 {
        return Vec::new();
    }
    // (left, right, left endpoint belongs to the set), right to left.
    let mut pieces: Vec<(Rational, Rational, bool)> = Vec::new();
    let mut best = pts[n - 1].1.clone();
    for i in (0..n - 1).rev() {
        let (x0, v0) = &pts[i];
        let (x1, v1) = &pts[i + 1];
        if v0 < &best {
            pieces.push((x0.clone(), x1.clone(), true));
        } else if v1 < &best {
            let c = x0 + (&best - v0) * (x1 - x0) / (v1 - v0);
            pieces.push((c, x1.clone(), false));
        }
        if v0 > &best {
            best = v0.clone();
        }
    }
    pieces.reverse();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (c, d, closed) in pieces {
        match out.last_mut() {
            Some(last) if last.1 == c && closed => last.1 = d,
            _ => out.push((c, d)),
        }
    }
    out
}
