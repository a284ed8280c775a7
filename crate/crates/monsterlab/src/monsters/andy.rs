use alloc::vec::Vec;

use super::pompeiu::{g_prime_lower_on, pompeiu_g, pompeiu_h, pompeiu_h_ball, PompeiuSpec};
use crate::evalcore::{oscillation, up, Ball};
use crate::Result;

/// `cos(1/x)`, and `0` at the origin.
pub fn andy_gamma(x: f64) -> Ball {
    if x == 0.0 {
        return Ball::ZERO;
    }
    Ball::exact(x).recip().cos()
}

/// Data for `φ(x) = m h'(x - b)` on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct AndySpec {
    pub pompeiu: PompeiuSpec,
    /// `b = g(q_1)`, a zero of `h'`.
    pub b: f64,
    /// Scale with `φ[-1, 1] ⊂ [0, 1]`.
    pub m: f64,
}

impl AndySpec {
    /// `m` is a certified lower bound of the truncated `g'` over `h[-1 - b, 1 - b]`,
    /// so the surrogate `m / g'_N(h(y))` never exceeds 1 on the window.
    pub fn new(pompeiu: PompeiuSpec) -> Result<AndySpec> {
        let b = pompeiu_g(&pompeiu, pompeiu.q_ball(1).center).center;
        let lo = pompeiu_h(&pompeiu, -1.0 - b, 0.0)?.lo;
        let hi = pompeiu_h(&pompeiu, 1.0 - b, 0.0)?.hi;
        let m = g_prime_lower_on(&pompeiu, lo, hi, pompeiu.truncation());
        Ok(AndySpec { pompeiu, b, m })
    }

    /// Points of `(-1, 1)` where `φ` vanishes: `b + g(q_j)`.
    pub fn zero_points(&self, count: usize) -> Vec<f64> {
        (1..=self.pompeiu.truncation())
            .map(|j| self.b + pompeiu_g(&self.pompeiu, self.pompeiu.q_ball(j).center).center)
            .filter(|x| x.abs() < 1.0)
            .take(count)
            .collect()
    }
}

/// Range of the truncated `g'` over `[lo, hi]` as `(lower, upper)`; the upper end is
/// infinite when an enumerated point lies in the interval.
fn g_prime_range(p: &PompeiuSpec, lo: f64, hi: f64) -> (f64, f64) {
    let lower = g_prime_lower_on(p, lo, hi, p.truncation());
    let mut upper = 0.0f64;
    let third = Ball::ONE / Ball::exact(3.0);
    for i in 1..=p.truncation() {
        let q = p.q_ball(i);
        let (a, b) = (Ball::exact(lo) - q, Ball::exact(hi) - q);
        if a.lo() <= 0.0 && b.hi() >= 0.0 {
            return (lower, f64::INFINITY);
        }
        let near = a.mig().min(b.mig());
        let term = p.weight(i) * third / Ball::exact(near).pow_two_thirds();
        upper = up(upper + term.hi());
    }
    (lower, upper)
}

/// `φ(x) = m / g'_N(h(x - b))`, the truncated stand-in for `m h'(x - b)`.
pub fn andy_phi(spec: &AndySpec, x: f64) -> Result<Ball> {
    let y = Ball::exact(x) - Ball::exact(spec.b);
    let h = pompeiu_h_ball(&spec.pompeiu, y)?;
    let (lo, hi) = g_prime_range(&spec.pompeiu, h.lo(), h.hi());
    let m = Ball::exact(spec.m);
    let top = if lo > 0.0 { (m / Ball::exact(lo)).hi() } else { f64::INFINITY };
    let bottom = if hi.is_finite() { (m / Ball::exact(hi)).lo().max(0.0) } else { 0.0 };
    Ok(Ball::from_interval(bottom, top.min(1.0)))
}

/// `ψ = γ ∘ φ`.
pub fn andy_psi(spec: &AndySpec, x: f64) -> Result<Ball> {
    let p = andy_phi(spec, x)?;
    if p.mig() == 0.0 {
        return Ok(Ball::from_interval(-1.0, 1.0));
    }
    Ok(p.recip().cos())
}

/// Sampled oscillation of `ψ` around `x0` at each of the decreasing `deltas`.
pub fn andy_oscillation(spec: &AndySpec, x0: f64, deltas: &[f64], density: usize) -> Result<Vec<f64>> {
    let f = |x: f64| andy_psi(spec, x).unwrap_or(Ball::from_interval(-1.0, 1.0));
    deltas.iter().map(|&d| oscillation(f, x0, &[d], density)).collect()
}
