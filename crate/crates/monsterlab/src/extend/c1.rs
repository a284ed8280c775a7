use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::setfn::{hat_f, SetFunction};
use super::Jet;
use crate::evalcore::{int, rpow, Rational};
use crate::perfectsets::{GapSet, Generator};
use crate::Result;

/// Outcome of [`c1_criterion`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1Report {
    pub ok: bool,
    /// Carrier point of the worst pair at the decisive scale (failures only).
    pub witness: Option<Rational>,
    /// Gap whose middle-third slope gave the worst pair, if it was a gap.
    pub witness_gap: Option<(Rational, Rational)>,
    /// Decisive scale: the finest ladder scale with at least one point-gap pair.
    pub scale: Option<Rational>,
    pub omega: Rational,
    /// `(δ, ω(δ))` down the ladder `δ = H 2^{-j}`.
    pub ladder: Vec<(Rational, Rational)>,
}

struct Pair {
    key: Rational,
    diff: Rational,
    x: Rational,
    gap: Option<(Rational, Rational)>,
}

/// Continuity of `f̂'` at the carrier samples at the finest resolved scale.
///
/// A carrier point `x` and a gap `J` not adjacent to `x` enter at scale `δ` once
/// `|J| < δ` and the middle third of `J` is within `δ` of `x`; two carrier points
/// enter once closer than `δ`. `ω(δ)` is the largest derivative mismatch among the
/// pairs present; the verdict uses the finest ladder scale at which a point-gap pair
/// exists (a point-point pair when there are no gaps).
pub fn c1_criterion(f: &SetFunction, tol: &Rational) -> Result<C1Report> {
    let fh = hat_f(f)?;
    let mut pairs = Vec::new();
    let thirds: Vec<(Rational, Rational, Rational, Rational, Rational)> = (0..f.carrier.gaps.len())
        .map(|k| {
            let (a, b) = f.carrier.gaps[k].clone();
            let t = (&b - &a) / int(3);
            let p = &a + &t;
            let q = &b - &t;
            let s = fh.jet(&p).expect("middle third jet").derivs[1].clone();
            (a, b, p, q, s)
        })
        .collect();
    for j in &f.jets {
        let x = &j.point;
        for (a, b, p, q, s) in &thirds {
            if a <= x && x <= b {
                continue;
            }
            let dist = if x < p { p - x } else { x - q };
            let len = b - a;
            let key = if dist > len { dist } else { len };
            pairs.push(Pair { key, diff: (&j.derivs[1] - s).abs(), x: x.clone(), gap: Some((a.clone(), b.clone())) });
        }
    }
    let has_gap_pairs = !pairs.is_empty();
    for (i, u) in f.jets.iter().enumerate() {
        for v in &f.jets[i + 1..] {
            let d = (&u.derivs[1] - &v.derivs[1]).abs();
            pairs.push(Pair { key: &v.point - &u.point, diff: d.clone(), x: u.point.clone(), gap: None });
        }
    }
    let hull = &f.carrier.hi - &f.carrier.lo;
    let empty = C1Report { ok: true, witness: None, witness_gap: None, scale: None, omega: Rational::zero(), ladder: Vec::new() };
    let decisive: Vec<&Pair> = pairs.iter().filter(|p| !has_gap_pairs || p.gap.is_some()).collect();
    let Some(kmin) = decisive.iter().map(|p| &p.key).min() else { return Ok(empty) };
    if hull.is_zero() {
        return Ok(empty);
    }
    let mut ladder = Vec::new();
    let mut j = 0i32;
    let (scale, omega, worst) = loop {
        let delta = &hull * rpow(&int(2), -j);
        let mut omega = Rational::zero();
        let mut worst: Option<&Pair> = None;
        for p in pairs.iter().filter(|p| p.key < delta) {
            let better = match worst {
                None => true,
                Some(w) => p.diff > omega || (p.diff == omega && p.x < w.x),
            };
            if better {
                omega = p.diff.clone();
                worst = Some(p);
            }
        }
        ladder.push((delta.clone(), omega.clone()));
        let next = &hull * rpow(&int(2), -(j + 1));
        if &next <= kmin {
            break (delta, omega, worst);
        }
        j += 1;
    };
    let ok = &omega <= tol;
    Ok(C1Report {
        ok,
        witness: if ok { None } else { worst.map(|w| w.x.clone()) },
        witness_gap: if ok { None } else { worst.and_then(|w| w.gap.clone()) },
        scale: Some(scale),
        omega,
        ladder,
    })
}

/// Staircase data: `f' = 0` on `{0} ∪ ⋃_n [2^{-n}, 2^{1-n} - 4^{-n}]`, constant on each
/// segment, dropping by `slope_n · 4^{-n-1}` across the gap left of segment `n`, with
/// `slope_n = lambda · ratio^n`. For `ratio = 1` the gap slopes stay at `lambda`.
pub fn staircase(segments: u32, lambda: &Rational, ratio: &Rational) -> Result<SetFunction> {
    let n_max = segments.max(1) as i32;
    let two = int(2);
    let four = int(4);
    let a = |n: i32| rpow(&two, -n);
    let b = |n: i32| rpow(&two, 1 - n) - rpow(&four, -n);
    let slope = |n: i32| lambda * rpow(ratio, n);
    // c[n] is the value on segment n.
    let mut c = alloc::vec![Rational::zero(); n_max as usize + 1];
    c[n_max as usize] = slope(n_max) * rpow(&four, -n_max - 1);
    for n in (1..n_max).rev() {
        c[n as usize] = &c[n as usize + 1] + slope(n) * rpow(&four, -n - 1);
    }
    let mut gaps = alloc::vec![(Rational::zero(), a(n_max))];
    for n in 1..n_max {
        gaps.push((b(n + 1), a(n)));
    }
    let carrier = GapSet::new(Rational::zero(), b(1), gaps, Generator::Explicit)?;
    let mut jets = alloc::vec![Jet::new(Rational::zero(), alloc::vec![Rational::zero(), Rational::zero()])];
    for n in 1..=n_max {
        let v = c[n as usize].clone();
        jets.push(Jet::new(a(n), alloc::vec![v.clone(), Rational::zero()]));
        jets.push(Jet::new(b(n), alloc::vec![v, Rational::zero()]));
    }
    SetFunction::new(carrier, jets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalcore::rat;

    #[test]
    fn staircase_gap_slopes() {
        let f = staircase(5, &rat(1, 1), &rat(1, 2)).unwrap();
        // Gap left of segment n has slope ratio^n.
        for n in 1..5 {
            let k = f.carrier.gaps.iter().position(|g| g.1 == rpow(&int(2), -n)).unwrap();
            assert_eq!(f.gap_slope(k).unwrap(), rpow(&rat(1, 2), n));
        }
    }
}
