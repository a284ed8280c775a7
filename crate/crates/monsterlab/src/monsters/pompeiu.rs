use alloc::collections::VecDeque;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::evalcore::{down, invert_monotone, rat, Ball, Inverse, Rational};
use crate::{Error, Result};

/// Parameters of `g(x) = Σ r^i (x - q_i)^{1/3}`.
#[derive(Clone, Debug)]
pub struct PompeiuSpec {
    pub r: Rational,
    /// `q_1, …, q_N`; `|q_i| <= i` is checked on construction.
    pub q: Vec<Rational>,
    /// When set the series is the finite sum over `q` and has no tail.
    pub finite: bool,
    r_ball: Ball,
    q_ball: Vec<Ball>,
    weight: Vec<Ball>,
}

impl PompeiuSpec {
    /// Series over the default enumeration truncated after `n` terms.
    pub fn new(r: Rational, n: usize) -> Result<PompeiuSpec> {
        PompeiuSpec::build(r, diagonal_enumeration(n), false)
    }

    /// Finite sum over an explicit list (used for hand-checkable examples).
    pub fn finite(r: Rational, q: Vec<Rational>) -> Result<PompeiuSpec> {
        PompeiuSpec::build(r, q, true)
    }

    /// `r = 1/2` and 80 terms.
    pub fn standard() -> PompeiuSpec {
        PompeiuSpec::new(rat(1, 2), 80).expect("valid default")
    }

    fn build(r: Rational, q: Vec<Rational>, finite: bool) -> Result<PompeiuSpec> {
        if !(r > Rational::zero() && r < Rational::one()) {
            return Err(Error::Invalid("r must lie in (0, 1)".into()));
        }
        for (i, qi) in q.iter().enumerate() {
            if qi.abs() > Rational::from_integer(BigInt::from(i + 1)) {
                return Err(Error::Invalid(alloc::format!("|q_{}| exceeds {}", i + 1, i + 1)));
            }
        }
        let r_ball = Ball::from_rational(&r);
        let mut weight = Vec::with_capacity(q.len());
        let mut w = r_ball;
        for _ in 0..q.len() {
            weight.push(w);
            w = w * r_ball;
        }
        let q_ball = q.iter().map(Ball::from_rational).collect();
        Ok(PompeiuSpec { r, q, finite, r_ball, q_ball, weight })
    }

    pub fn truncation(&self) -> usize {
        self.q.len()
    }

    /// Bound on `Σ_{i>N} r^i (|x| + i + 1)`.
    pub fn tail(&self, x_abs: f64) -> f64 {
        if self.finite {
            return 0.0;
        }
        let n = self.q.len() as f64;
        let r = self.r_ball;
        let one = Ball::ONE;
        let rn1 = r.powi(self.q.len() as u32 + 1);
        let omr = one - r;
        // (|x| + 1) r^{N+1} / (1 - r) + r^{N+1} ((N + 1) - N r) / (1 - r)²
        let a = Ball::exact(x_abs) + one;
        let first = a * rn1 / omr;
        let second = rn1 * (Ball::exact(n + 1.0) - Ball::exact(n) * r) / omr.sqr();
        (first + second).hi()
    }

    pub fn q_ball(&self, i: usize) -> Ball {
        self.q_ball[i - 1]
    }

    pub fn weight(&self, i: usize) -> Ball {
        self.weight[i - 1]
    }
}

/// Rationals in diagonal order: `0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, -1/3, …`,
/// with any value that would break `|q_i| <= i` deferred to a later slot.
pub fn diagonal_enumeration(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut pending: VecDeque<Rational> = VecDeque::new();
    let mut s: i64 = 1;
    while out.len() < n {
        for b in 1..=s {
            let a = s - b;
            if a.gcd(&b) != 1 {
                continue;
            }
            pending.push_back(rat(a, b));
            if a != 0 {
                pending.push_back(rat(-a, b));
            }
        }
        s += 1;
        while out.len() < n {
            let bound = Rational::from_integer(BigInt::from(out.len() + 1));
            match pending.iter().position(|q| q.abs() <= bound) {
                Some(i) => {
                    let q = pending.remove(i).expect("index in range");
                    out.push(q);
                }
                None => break,
            }
        }
    }
    out
}

/// `g(x)` with the truncation tail folded into the radius.
pub fn pompeiu_g(spec: &PompeiuSpec, x: f64) -> Ball {
    let xb = Ball::exact(x);
    let mut acc = Ball::ZERO;
    for (w, q) in spec.weight.iter().zip(&spec.q_ball) {
        acc = acc + *w * (xb - *q).cbrt();
    }
    acc.widen(spec.tail(x.abs()))
}

/// Lower bound on `g'(x)` from the first `terms` terms; `+∞` when `x` is one of them.
pub fn pompeiu_g_prime_lower(spec: &PompeiuSpec, x: f64, terms: usize) -> f64 {
    let Some(xq) = Rational::from_float(x) else {
        return 0.0;
    };
    if spec.q.iter().take(terms).any(|q| *q == xq) {
        return f64::INFINITY;
    }
    g_prime_lower_on(spec, x, x, terms)
}

/// Lower bound on `g'` over `[lo, hi]` from the first `terms` terms.
///
/// Each term is bounded below by its value at the largest possible `|x - q_i|`.
pub fn g_prime_lower_on(spec: &PompeiuSpec, lo: f64, hi: f64, terms: usize) -> f64 {
    let mut acc = 0.0f64;
    let third = Ball::ONE / Ball::exact(3.0);
    for (w, q) in spec.weight.iter().zip(&spec.q_ball).take(terms) {
        let far = (Ball::exact(lo) - *q).mag().max((Ball::exact(hi) - *q).mag());
        let term = *w * third / Ball::exact(far).pow_two_thirds();
        acc = down(acc + term.lo().max(0.0));
    }
    acc.max(0.0)
}

/// The partial sum `Σ_{i<=terms} r^i / (3 (x - q_i)^{2/3})` as a point estimate.
pub fn g_prime_partial(spec: &PompeiuSpec, x: f64, terms: usize) -> f64 {
    let mut acc = 0.0;
    for (w, q) in spec.weight.iter().zip(&spec.q_ball).take(terms) {
        let d = (x - q.center).abs();
        if d == 0.0 {
            return f64::INFINITY;
        }
        acc += w.center / (3.0 * libm::cbrt(d * d));
    }
    acc
}

const GROWTH_CAP: u32 = 60;

/// `h = g^{-1}` at `y` with a certified enclosure.
pub fn pompeiu_h(spec: &PompeiuSpec, y: f64, tol: f64) -> Result<Inverse> {
    if !y.is_finite() {
        return Err(Error::Invalid("non-finite argument".into()));
    }
    let yb = Ball::exact(y);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    let mut grown = 0;
    while !pompeiu_g(spec, lo).certainly_lt(&yb) {
        lo *= 2.0;
        grown += 1;
        if grown > GROWTH_CAP {
            return Err(Error::BracketGrowth);
        }
    }
    while !yb.certainly_lt(&pompeiu_g(spec, hi)) {
        hi *= 2.0;
        grown += 1;
        if grown > GROWTH_CAP {
            return Err(Error::BracketGrowth);
        }
    }
    let inv = invert_monotone(|x| pompeiu_g(spec, x), y, (lo, hi), tol)?;
    if !inv.certified {
        return Err(Error::Stall);
    }
    Ok(inv)
}

/// Enclosure of `h` over a ball of arguments (hull of the two end inversions).
pub fn pompeiu_h_ball(spec: &PompeiuSpec, y: Ball) -> Result<Ball> {
    if y.radius == 0.0 {
        return Ok(pompeiu_h(spec, y.center, 0.0)?.ball());
    }
    let a = pompeiu_h(spec, y.lo(), 0.0)?;
    let b = pompeiu_h(spec, y.hi(), 0.0)?;
    Ok(Ball::from_interval(a.lo, b.hi))
}

/// `h(x - t)` with the subtraction error accounted for.
pub(crate) fn h_shifted(spec: &PompeiuSpec, x: f64, t: f64) -> Result<Ball> {
    let s = x - t;
    // Two-sum error term; zero means `s` is exact.
    let bb = s - x;
    let err = (x - (s - bb)) + (-t - bb);
    if err == 0.0 {
        pompeiu_h_ball(spec, Ball::exact(s))
    } else {
        pompeiu_h_ball(spec, Ball::from_interval(s.next_down(), s.next_up()))
    }
}
