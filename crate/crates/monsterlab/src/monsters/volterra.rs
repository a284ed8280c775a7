use alloc::vec::Vec;

use crate::evalcore::{f64_to_rational, Ball, Rational};
use crate::perfectsets::GapSet;
use crate::{Error, Result};

/// `x² sin(1/x)`, and `0` at the origin.
pub fn volterra_h(x: f64) -> Ball {
    volterra_h_ball(Ball::exact(x))
}

pub fn volterra_h_ball(x: Ball) -> Ball {
    if x.center == 0.0 && x.radius == 0.0 {
        return Ball::ZERO;
    }
    if x.mig() == 0.0 {
        // |h(x)| <= x² on any ball touching the origin.
        let m = x.mag();
        return Ball::new(0.0, Ball::exact(m).sqr().hi());
    }
    let s = x.recip().sin();
    x.sqr() * s
}

/// `2x sin(1/x) - cos(1/x)`, and `0` at the origin.
pub fn volterra_h_prime(x: f64) -> Ball {
    if x == 0.0 {
        return Ball::ZERO;
    }
    let xb = Ball::exact(x);
    let u = xb.recip();
    xb.mul_f64(2.0) * u.sin() - u.cos()
}

/// `x + 2x² sin(1/x)`.
pub fn psi(x: f64) -> Ball {
    Ball::exact(x) + volterra_h(x).mul_f64(2.0)
}

/// `x⁴ (2 + sin(1/x))`.
pub fn phi(x: f64) -> Ball {
    if x == 0.0 {
        return Ball::ZERO;
    }
    let xb = Ball::exact(x);
    let s = xb.recip().sin() + Ball::exact(2.0);
    xb.powi(4) * s
}

/// `e^{-3x} x² sin(1/x)`.
pub fn eta(x: f64) -> Ball {
    if x == 0.0 {
        return Ball::ZERO;
    }
    Ball::exact(-3.0 * x).exp() * volterra_h(x)
}

/// `e^{-3x} (-3x² sin(1/x) + 2x sin(1/x) - cos(1/x))`.
pub fn eta_prime(x: f64) -> Ball {
    if x == 0.0 {
        return Ball::ZERO;
    }
    let xb = Ball::exact(x);
    let u = xb.recip();
    let (s, c) = (u.sin(), u.cos());
    let inner = xb.sqr().mul_f64(-3.0) * s + xb.mul_f64(2.0) * s - c;
    Ball::exact(-3.0 * x).exp() * inner
}

/// A zero of `h'` in `(0.2, 0.4)` as a certified enclosure.
///
/// Bisection keeps `h'(lo) < 0 < h'(hi)` certified at every step.
pub fn volterra_zero() -> Ball {
    let (mut lo, mut hi) = (0.2f64, 0.4f64);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        let v = volterra_h_prime(m);
        if v.certainly_negative() {
            lo = m;
        } else if v.certainly_positive() {
            hi = m;
        } else {
            break;
        }
    }
    Ball::from_interval(lo, hi)
}

/// Volterra-type function on a closed set: `0` on `E` and
/// `h(2d dist(x, {a, b}) / (b - a))` on a gap `(a, b)`.
#[derive(Clone, Debug)]
pub struct VolterraOnSet {
    pub set: GapSet,
    pub d: Ball,
}

impl VolterraOnSet {
    pub fn new(set: GapSet) -> VolterraOnSet {
        VolterraOnSet { set, d: volterra_zero() }
    }

    pub fn eval(&self, x: f64) -> Result<Ball> {
        volterra_on_set_with(&self.set, self.d, x)
    }
}

pub fn volterra_on_set(set: &GapSet, x: f64) -> Result<Ball> {
    volterra_on_set_with(set, volterra_zero(), x)
}

fn volterra_on_set_with(set: &GapSet, d: Ball, x: f64) -> Result<Ball> {
    if !x.is_finite() {
        return Err(Error::Invalid("non-finite point".into()));
    }
    let q: Rational = f64_to_rational(x);
    if q < set.lo || q > set.hi {
        return Err(Error::OutsideHull);
    }
    let Some(i) = set.gap_index(&q) else {
        return Ok(Ball::ZERO);
    };
    let (a, b) = &set.gaps[i];
    let dist = core::cmp::min(&q - a, b - &q);
    let arg = Ball::from_rational(&dist) * d.mul_f64(2.0) / Ball::from_rational(&(b - a));
    // The argument lies in [0, d]; clamp off the rounding slack below zero.
    Ok(volterra_h_ball(arg.clamp_to(0.0, d.hi())))
}

/// Finite part and tail bound of `Σ 3^{-n} f_{E_n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub partial: Ball,
    /// Bound on the omitted terms `n >= len`, using `|f_E| <= d²`.
    pub tail: f64,
}

impl SeriesValue {
    pub fn ball(&self) -> Ball {
        self.partial.widen(self.tail)
    }
}

pub fn discont_on_g(sets: &[GapSet], x: f64) -> Result<SeriesValue> {
    let d = volterra_zero();
    let mut acc = Ball::ZERO;
    let mut w = Ball::ONE;
    let third = Ball::ONE / Ball::exact(3.0);
    let mut terms: Vec<Ball> = Vec::with_capacity(sets.len());
    for e in sets {
        terms.push(volterra_on_set_with(e, d, x)? * w);
        w = w * third;
    }
    for t in terms {
        acc = acc + t;
    }
    // Σ_{n >= len} 3^{-n} d² = (3/2) 3^{-len} d²
    let tail = (w.mul_f64(1.5) * d.sqr()).hi();
    Ok(SeriesValue { partial: acc, tail })
}
