use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Ball;
use crate::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn pow_int(base: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// `base^e` as an exact rational, negative exponents allowed.
pub fn rpow(base: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn rabs(q: &Rational) -> Rational {
    q.abs()
}

/// `"p/q"` form; integers are written as `"p/1"`.
pub fn format_rational(q: &Rational) -> String {
    let mut s = q.numer().to_string();
    s.push('/');
    s.push_str(&q.denom().to_string());
    s
}

/// Parse `"p/q"`, `"p"` or a plain decimal literal such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(alloc::format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: String = ip.chars().chain(fp.chars()).collect();
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let d = pow_int(10, fp.len() as u32);
    let q = Rational::new(n, d);
    Ok(if neg { -q } else { q })
}

/// Dense polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    pub coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> RatPoly {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn zero() -> RatPoly {
        RatPoly::new(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_ball(&self, x: Ball) -> Ball {
        let mut acc = Ball::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Ball::from_rational(c);
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> RatPoly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / Rational::from_integer(BigInt::from(i + 1)));
        }
        RatPoly::new(out)
    }

    /// `p(x + s)` as a polynomial in `x`.
    pub fn shift(&self, s: &Rational) -> RatPoly {
        let mut out = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            out = out.mul(&RatPoly::new(alloc::vec![s.clone(), Rational::one()]));
            out.coeffs[0] += c;
        }
        RatPoly::new(out.coeffs)
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = alloc::vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            v[i] += c;
        }
        RatPoly::new(v)
    }

    pub fn scale(&self, k: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        let mut v = alloc::vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RatPoly::new(v)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
