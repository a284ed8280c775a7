use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::evalcore::{pow_int, Rational};
use crate::perfectsets::SweepReport;

/// Truncation depth of `Σ 4^n f_n`, `f_n = dist(·, 8^{-n} Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TakagiSpec {
    pub depth: u32,
}

/// Exact partial sum and the bound on the omitted terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TakagiValue {
    pub partial: Rational,
    /// `Σ_{n > depth} 4^n f_n(x) <= 2^{-depth-1}`, so two values differ from
    /// their partial sums by at most `2^{-depth}` in total.
    pub tail: Rational,
}

/// `dist(x, 8^{-n} Z)`.
pub fn lattice_distance(x: &Rational, n: u32) -> Rational {
    let scale = Rational::from_integer(pow_int(8, n));
    let y = x * &scale;
    let fl = y.floor();
    let frac = &y - &fl;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let d = if frac <= half { frac } else { Rational::one() - frac };
    d / scale
}

pub fn takagi(spec: TakagiSpec, x: &Rational) -> TakagiValue {
    let mut acc = Rational::from_integer(BigInt::from(0));
    let mut w = BigInt::one();
    for n in 0..=spec.depth {
        acc += lattice_distance(x, n) * Rational::from_integer(w.clone());
        w *= 4;
    }
    TakagiValue { partial: acc, tail: Rational::new(BigInt::one(), pow_int(2, spec.depth + 1)) }
}

/// Endpoint quotient `8^n |S_n((k+1)/8^n) - S_n(k/8^n)|` over the lattice cell at level `n`.
pub fn anchor_quotient(k: &BigInt, n: u32) -> Rational {
    let spec = TakagiSpec { depth: n };
    let den = pow_int(8, n);
    let a = Rational::new(k.clone(), den.clone());
    let b = Rational::new(k + 1, den.clone());
    let d = takagi(spec, &b).partial - takagi(spec, &a).partial;
    (d * Rational::from_integer(den)).abs()
}

/// Scaled sum `8^d Σ_{i<d} 4^i dist(j/8^d, 8^{-i} Z)`; an integer since `f_i` vanishes
/// on the grid for `i >= d`.
fn scaled_value(j: i64, d: u32) -> i64 {
    let mut acc = 0i64;
    let mut w = 1i64;
    for i in 0..d {
        let cell = 8i64.pow(d - i);
        let r = j.mod_floor(&cell);
        acc += w * r.min(cell - r);
        w *= 4;
    }
    acc
}

/// Anchor inequality at every `x = j/8^d` in `[0, 1]` and every `1 <= n <= d`:
/// both the cell's endpoint quotient and the better of the two endpoint
/// quotients from `x` are at least `(2/3) 4^{n-1}`.
///
/// The sum is 1-periodic, so `[0, 1]` covers every dyadic of this level. At
/// `n = 0` the endpoints are integers, both vanish and there is nothing to check.
pub fn sweep_takagi_anchor(d: u32) -> SweepReport {
    let mut rep = SweepReport::default();
    let top = 8i64.pow(d);
    let vals: alloc::vec::Vec<i64> = (0..=top).map(|j| scaled_value(j, d)).collect();
    for j in 0..=top {
        for n in 1..=d {
            rep.cases += 1;
            let cell = 8i64.pow(d - n);
            let mut a = Integer::div_floor(&j, &cell) * cell;
            if a == top {
                a -= cell;
            }
            let b = a + cell;
            let fj = vals[j as usize];
            // quotient numerators and denominators in units of 8^{-d}
            let end = (vals[b as usize] - vals[a as usize]).abs();
            let mut best_num = 0i64;
            let mut best_den = 1i64;
            for y in [a, b] {
                if y == j {
                    continue;
                }
                let num = (fj - vals[y as usize]).abs();
                let den = (j - y).abs();
                if num * best_den > best_num * den {
                    best_num = num;
                    best_den = den;
                }
            }
            let need = 4i64.pow(n);
            // |q| >= (2/3) 4^{n-1}  <=>  6 |Δ| >= 4^n |Δx|
            let ok_end = 6 * end >= need * cell;
            let ok_pt = 6 * best_num >= need * best_den;
            if !(ok_end && ok_pt) {
                rep.fail(|| alloc::format!("x={j}/8^{d}, n={n}"));
            }
        }
    }
    rep
}
