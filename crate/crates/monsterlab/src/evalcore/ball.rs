use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Rational;

/// Round a non-negative error term up by one unit in the last place.
#[inline]
pub(crate) fn up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
pub(crate) fn down(x: f64) -> f64 {
    x.next_down()
}

/// Error bound for a correctly rounded (or faithfully rounded) result `c`.
#[inline]
fn ulp_err(c: f64) -> f64 {
    up(c.abs() * f64::EPSILON) + f64::from_bits(1)
}

/// A certified real number: the exact value lies in `[center - radius, center + radius]`.
///
/// Every operation widens the radius by at least one ulp of the result, so a ball
/// computed from balls that contain their exact inputs contains the exact output.
/// Non-finite centers or radii are allowed and mean "no information".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: f64,
    pub radius: f64,
}

impl Ball {
    pub const ZERO: Ball = Ball { center: 0.0, radius: 0.0 };
    pub const ONE: Ball = Ball { center: 1.0, radius: 0.0 };

    pub fn new(center: f64, radius: f64) -> Ball {
        Ball { center, radius: radius.abs() }
    }

    /// A floating-point number taken as exact.
    pub const fn exact(x: f64) -> Ball {
        Ball { center: x, radius: 0.0 }
    }

    pub fn from_interval(lo: f64, hi: f64) -> Ball {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let c = lo * 0.5 + hi * 0.5;
        let r = up((hi - c).max(c - lo));
        Ball { center: c, radius: up(r) }
    }

    pub fn from_rational(q: &Rational) -> Ball {
        let c = rational_to_f64(q);
        if c.is_finite() {
            Ball { center: c, radius: ulp_err(c) }
        } else {
            Ball { center: c, radius: f64::INFINITY }
        }
    }

    pub fn from_int(n: i64) -> Ball {
        let c = n as f64;
        if c as i64 == n && c.abs() < 9.007_199_254_740_992e15 {
            Ball::exact(c)
        } else {
            Ball { center: c, radius: ulp_err(c) }
        }
    }

    pub fn lo(&self) -> f64 {
        down(self.center - self.radius)
    }

    pub fn hi(&self) -> f64 {
        up(self.center + self.radius)
    }

    pub fn is_finite(&self) -> bool {
        self.center.is_finite() && self.radius.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    /// Exact containment test for a rational value.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        if !self.is_finite() {
            return true;
        }
        let lo = Rational::from_float(self.lo());
        let hi = Rational::from_float(self.hi());
        match (lo, hi) {
            (Some(lo), Some(hi)) => &lo <= q && q <= &hi,
            _ => true,
        }
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        !(self.hi() < other.lo() || other.hi() < self.lo())
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo() > 0.0
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi() < 0.0
    }

    pub fn certainly_lt(&self, other: &Ball) -> bool {
        self.hi() < other.lo()
    }

    /// Certified ordering, `None` when the balls overlap.
    pub fn certain_cmp(&self, other: &Ball) -> Option<Ordering> {
        if self.hi() < other.lo() {
            Some(Ordering::Less)
        } else if other.hi() < self.lo() {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Upper bound on `|x|` over the ball.
    pub fn mag(&self) -> f64 {
        up(self.center.abs() + self.radius)
    }

    /// Lower bound on `|x|` over the ball.
    pub fn mig(&self) -> f64 {
        let m = down(self.center.abs() - self.radius);
        if m > 0.0 {
            m
        } else {
            0.0
        }
    }

    pub fn abs(self) -> Ball {
        if self.center.abs() >= self.radius {
            Ball { center: self.center.abs(), radius: self.radius }
        } else {
            Ball::from_interval(0.0, self.mag())
        }
    }

    pub fn widen(self, extra: f64) -> Ball {
        Ball { center: self.center, radius: up(self.radius + extra.abs()) }
    }

    pub fn scale_pow2(self, k: i32) -> Ball {
        let f = libm::ldexp(1.0, k);
        Ball { center: self.center * f, radius: self.radius * f }.widen(0.0)
    }

    pub fn sqr(self) -> Ball {
        let a = self.abs();
        a * a
    }

    pub fn powi(self, n: u32) -> Ball {
        let mut acc = Ball::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn recip(self) -> Ball {
        Ball::ONE / self
    }

    /// Monotone map applied to the endpoints, each widened by `ulps` result ulps.
    fn monotone(self, f: impl Fn(f64) -> f64, increasing: bool, ulps: f64) -> Ball {
        if !self.is_finite() {
            return Ball { center: f(self.center), radius: f64::INFINITY };
        }
        let (a, b) = (f(self.lo()), f(self.hi()));
        let (lo, hi) = if increasing { (a, b) } else { (b, a) };
        let lo = down(lo - ulps * ulp_err(lo));
        let hi = up(hi + ulps * ulp_err(hi));
        Ball::from_interval(lo, hi)
    }

    pub fn cbrt(self) -> Ball {
        self.monotone(libm::cbrt, true, 2.0)
    }

    pub fn sqrt(self) -> Ball {
        let lo = self.lo().max(0.0);
        let hi = self.hi();
        if hi < 0.0 {
            return Ball { center: f64::NAN, radius: f64::INFINITY };
        }
        Ball::from_interval(lo, hi).monotone(libm::sqrt, true, 1.0)
    }

    pub fn exp(self) -> Ball {
        self.monotone(libm::exp, true, 2.0)
    }

    /// Natural logarithm; the ball must lie in `(0, ∞)`.
    pub fn ln(self) -> Ball {
        if self.lo() <= 0.0 {
            return Ball { center: f64::NAN, radius: f64::INFINITY };
        }
        self.monotone(libm::log, true, 2.0)
    }

    /// `x^(2/3)` for any real `x` (real cube root squared).
    pub fn pow_two_thirds(self) -> Ball {
        self.cbrt().sqr()
    }

    pub fn sin(self) -> Ball {
        trig(self, libm::sin)
    }

    pub fn cos(self) -> Ball {
        trig(self, libm::cos)
    }

    /// Intersection with `[lo, hi]`, used to apply a priori bounds.
    pub fn clamp_to(self, lo: f64, hi: f64) -> Ball {
        let a = self.lo().max(lo);
        let b = self.hi().min(hi);
        if a > b || (a == self.lo() && b == self.hi()) {
            self
        } else {
            Ball::from_interval(a, b)
        }
    }

    pub fn hull(self, other: Ball) -> Ball {
        Ball::from_interval(self.lo().min(other.lo()), self.hi().max(other.hi()))
    }

    pub fn mul_f64(self, k: f64) -> Ball {
        self * Ball::exact(k)
    }
}

fn trig(x: Ball, f: fn(f64) -> f64) -> Ball {
    if !x.is_finite() || x.radius >= 3.0 {
        return Ball::from_interval(-1.0, 1.0);
    }
    let c = f(x.center);
    // |f'| <= 1; libm's sin/cos are accurate to within an ulp, allow two plus an absolute floor.
    let r = up(up(x.radius + 2.0 * ulp_err(c)) + f64::EPSILON * f64::MIN_POSITIVE);
    Ball { center: c, radius: r }.clamp_to(-1.0, 1.0)
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball { center: -self.center, radius: self.radius }
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, o: Ball) -> Ball {
        let c = self.center + o.center;
        Ball { center: c, radius: up(up(self.radius + o.radius) + ulp_err(c)) }
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, o: Ball) -> Ball {
        self + (-o)
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, o: Ball) -> Ball {
        let c = self.center * o.center;
        let r = up(up(self.center.abs() * o.radius) + up(o.center.abs() * self.radius));
        let r = up(r + up(self.radius * o.radius));
        Ball { center: c, radius: up(r + ulp_err(c)) }
    }
}

impl Div for Ball {
    type Output = Ball;
    fn div(self, o: Ball) -> Ball {
        let den = o.mig();
        if den <= 0.0 {
            return Ball { center: f64::NAN, radius: f64::INFINITY };
        }
        let c = self.center / o.center;
        // |a/b - ac/bc| <= (ra + |c| rb) / (|bc| - rb)
        let num = up(self.radius + up(c.abs() * o.radius));
        let r = up(num / den);
        Ball { center: c, radius: up(up(r + ulp_err(c)) + ulp_err(c)) }
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} ± {:e}", self.center, self.radius)
    }
}

/// Nearest (to within an ulp) double to a rational.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaling by powers of two.
    let neg = q.is_negative();
    let n = q.numer().abs();
    let d = q.denom().clone();
    let shift = n.bits() as i64 - d.bits() as i64;
    let scaled = if shift > 60 {
        Rational::new(n, d << ((shift - 60) as usize))
    } else {
        Rational::new(n << ((60 - shift) as usize), d)
    };
    let m = (scaled.numer() / scaled.denom()).to_f64().unwrap_or(f64::INFINITY);
    let v = libm::ldexp(m, (shift - 60) as i32);
    if neg {
        -v
    } else {
        v
    }
}

/// Exact rational value of a finite double.
pub fn f64_to_rational(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(|| Rational::from_integer(BigInt::zero()))
}
