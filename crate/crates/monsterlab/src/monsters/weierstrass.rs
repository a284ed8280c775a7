use num_bigint::BigInt;
use num_integer::Integer;

use crate::evalcore::{f64_to_rational, Ball, Rational};

/// `Σ_{n<terms} 2^{-n} cos(13^n π x)` with the omitted tail `2^{1-terms}` in the radius.
///
/// The argument `13^n x` is reduced modulo 2 exactly before multiplying by π.
pub fn weierstrass_w(x: f64, terms: u32) -> Ball {
    if !x.is_finite() {
        return Ball::new(0.0, 2.0);
    }
    let xq = f64_to_rational(x);
    let two = BigInt::from(2);
    let pi = Ball::new(core::f64::consts::PI, f64::EPSILON * 4.0);
    let mut acc = Ball::ZERO;
    let mut scale = BigInt::from(1);
    for n in 0..terms {
        let y: Rational = &xq * Rational::from_integer(scale.clone());
        // y mod 2 in [0, 2)
        let (q, _) = y.numer().div_mod_floor(&(y.denom() * &two));
        let red = y - Rational::from_integer(q * &two);
        let arg = Ball::from_rational(&red) * pi;
        acc = acc + arg.cos().scale_pow2(-(n as i32));
        scale *= 13;
    }
    acc.widen(libm::ldexp(1.0, 1 - terms as i32))
}
