use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::evalcore::{pow_int, Rational};

/// Exact finite sum `Σ c_j 3^{-p_j}` with small integer coefficients.
///
/// Used where exponents run into the hundreds of thousands and a big-rational
/// representation would be wasteful. Terms are kept sorted by position with
/// distinct positions and non-zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ternary {
    terms: Vec<(i64, i64)>,
}

impl Ternary {
    pub fn zero() -> Ternary {
        Ternary { terms: Vec::new() }
    }

    /// `c · 3^{-p}`.
    pub fn term(c: i64, p: i64) -> Ternary {
        if c == 0 {
            Ternary::zero()
        } else {
            Ternary { terms: alloc::vec![(p, c)] }
        }
    }

    pub fn from_terms(mut t: Vec<(i64, i64)>) -> Ternary {
        t.sort_by_key(|&(p, _)| p);
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(t.len());
        for (p, c) in t {
            match out.last_mut() {
                Some(last) if last.0 == p => last.1 += c,
                _ => out.push((p, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        Ternary { terms: out }
    }

    pub fn terms(&self) -> &[(i64, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn merge(&self, other: &Ternary, sign: i64) -> Ternary {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i]);
                i += 1;
            } else if take_b {
                out.push((b[j].0, sign * b[j].1));
                j += 1;
            } else {
                let c = a[i].1 + sign * b[j].1;
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Ternary { terms: out }
    }

    pub fn add(&self, other: &Ternary) -> Ternary {
        self.merge(other, 1)
    }

    pub fn sub(&self, other: &Ternary) -> Ternary {
        self.merge(other, -1)
    }

    pub fn neg(&self) -> Ternary {
        Ternary { terms: self.terms.iter().map(|&(p, c)| (p, -c)).collect() }
    }

    /// Multiply by `3^{-k}`.
    pub fn shift(&self, k: i64) -> Ternary {
        Ternary { terms: self.terms.iter().map(|&(p, c)| (p + k, c)).collect() }
    }

    pub fn scale(&self, m: i64) -> Ternary {
        if m == 0 {
            return Ternary::zero();
        }
        Ternary { terms: self.terms.iter().map(|&(p, c)| (p, c * m)).collect() }
    }

    /// Exact sign.
    pub fn signum(&self) -> i32 {
        signum_terms(&self.terms)
    }

    pub fn cmp_exact(&self, other: &Ternary) -> Ordering {
        match self.sub(other).signum() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Conversion to a rational; costs grow with the largest position.
    pub fn to_rational(&self) -> Rational {
        let mut acc = Rational::zero();
        for &(p, c) in &self.terms {
            let unit = if p >= 0 {
                Rational::new(BigInt::one(), pow_int(3, p as u32))
            } else {
                Rational::from_integer(pow_int(3, (-p) as u32))
            };
            acc += unit * Rational::from_integer(BigInt::from(c));
        }
        acc
    }
}

/// Exact sign of `Σ c 3^{-p}` over terms sorted by position; repeated positions allowed.
pub fn signum_terms(terms: &[(i64, i64)]) -> i32 {
    // Bound on |combined coefficient| at any single position.
    let mut cmax: i128 = 0;
    let mut run: i128 = 0;
    let mut run_pos = i64::MIN;
    for &(p, c) in terms {
        if p != run_pos {
            run = 0;
            run_pos = p;
        }
        run += (c as i128).abs();
        cmax = cmax.max(run);
    }
    let mut acc: i128 = 0;
    let mut prev: i64 = 0;
    let mut i = 0;
    while i < terms.len() {
        let p = terms[i].0;
        let mut c: i128 = 0;
        while i < terms.len() && terms[i].0 == p {
            c += terms[i].1 as i128;
            i += 1;
        }
        if c == 0 {
            continue;
        }
        if acc != 0 {
            // value = 3^{-prev} (acc + R) with |R| <= cmax / 2
            if 2 * acc.abs() > cmax {
                return acc.signum() as i32;
            }
            let gap = p - prev;
            if gap > 40 {
                return acc.signum() as i32;
            }
            acc = acc * 3i128.pow(gap as u32) + c;
        } else {
            acc = c;
        }
        prev = p;
    }
    acc.signum() as i32
}
