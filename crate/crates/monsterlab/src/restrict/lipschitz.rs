use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::rising::rising_sun_points;
use super::sampled::{monotonicity, Monotonicity, SampledFunction};
use crate::evalcore::Rational;
use crate::perfectsets::{GapSet, Generator};
use crate::{Error, Result};

fn check_intervals(js: &[(Rational, Rational)]) -> Result<()> {
    if js.iter().any(|(c, d)| c >= d) {
        return Err(Error::Invalid("interval with left end >= right end".into()));
    }
    Ok(())
}

/// `true` when the open intervals cover `[alpha, beta]`.
pub fn covers(js: &[(Rational, Rational)], alpha: &Rational, beta: &Rational) -> bool {
    let mut reach = alpha.clone();
    loop {
        // `reach` is the leftmost point not yet known to be covered.
        let next = js.iter().filter(|(c, d)| c < &reach && &reach < d).map(|(_, d)| d).max();
        match next {
            Some(d) if d > beta => return true,
            Some(d) => reach = d.clone(),
            None => return false,
        }
    }
}

/// For a cover of `[alpha, beta]` by open intervals, `Σ ℓ > beta - alpha`.
/// Returns `Ok(false)` when the family is not a cover.
pub fn interval_cover_check(js: &[(Rational, Rational)], alpha: &Rational, beta: &Rational) -> Result<bool> {
    check_intervals(js)?;
    if alpha > beta {
        return Err(Error::EmptyInterval);
    }
    if !covers(js, alpha, beta) {
        return Ok(false);
    }
    Ok(length_sum(js) > beta - alpha)
}

/// For pairwise disjoint open intervals inside `(a, b)`, `Σ ℓ <= b - a`.
pub fn interval_disjoint_sum(js: &[(Rational, Rational)], a: &Rational, b: &Rational) -> Result<bool> {
    check_intervals(js)?;
    if a >= b {
        return Err(Error::EmptyInterval);
    }
    let mut sorted: Vec<&(Rational, Rational)> = js.iter().collect();
    sorted.sort();
    if sorted.iter().any(|(c, d)| c < a || d > b) {
        return Err(Error::Invalid("interval not inside (a, b)".into()));
    }
    if sorted.windows(2).any(|w| w[0].1 > w[1].0) {
        return Err(Error::Invalid("intervals not pairwise disjoint".into()));
    }
    Ok(length_sum(js) <= b - a)
}

pub fn length_sum(js: &[(Rational, Rational)]) -> Rational {
    js.iter().fold(Rational::zero(), |acc, (c, d)| acc + (d - c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LipschitzBranch {
    /// The model is constant on a segment, which is returned as `P`.
    Constant,
    /// Rising-sun construction on `[ā, b]`.
    RisingSun,
}

/// Result of [`lipschitz_restriction`].
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzCertificate {
    pub p: GapSet,
    pub l: Rational,
    pub a_bar: Rational,
    pub b: Rational,
    /// `f(ā)` and `f(b)` on the model, after flipping a decreasing `f`.
    pub f_a_bar: Rational,
    pub f_b: Rational,
    pub decreasing: bool,
    pub branch: LipschitzBranch,
    pub gap_length_sum: Rational,
    /// `(f(b) - f(ā)) / L`.
    pub bound: Rational,
    /// Model points of `P` used by the pairwise check: sample points and gap endpoints.
    pub points: Vec<(Rational, Rational)>,
    pub pairwise_checked: u64,
    pub pairwise_failed: u64,
}

impl LipschitzCertificate {
    /// `Σ ℓ(J) <= (f(b) - f(ā)) / L < b - ā` (rising-sun branch only).
    pub fn bound_holds(&self) -> bool {
        match self.branch {
            LipschitzBranch::Constant => self.gap_length_sum.is_zero(),
            LipschitzBranch::RisingSun => self.gap_length_sum <= self.bound && self.bound < &self.b - &self.a_bar,
        }
    }

    pub fn ok(&self) -> bool {
        self.pairwise_failed == 0 && self.bound_holds()
    }
}

/// Closed `P ⊂ [a, b]` on which the model of `f` is `L`-Lipschitz.
pub fn lipschitz_restriction(f: &SampledFunction, a: &Rational, b: &Rational, l: &Rational) -> Result<LipschitzCertificate> {
    if a >= b {
        return Err(Error::EmptyInterval);
    }
    let mut pts = f.model(a, b)?;
    let vals: Vec<&Rational> = pts.iter().map(|p| &p.1).collect();
    let decreasing = match monotonicity(&vals) {
        Monotonicity::Increasing => false,
        Monotonicity::Decreasing => true,
        Monotonicity::Flat(i) => {
            // Constant on a segment; the paper's trivial case. Other segments must still be monotone.
            let v: Vec<&Rational> = pts.iter().map(|p| &p.1).collect();
            let up = v.windows(2).all(|w| w[0] <= w[1]);
            let down = v.windows(2).all(|w| w[0] >= w[1]);
            if !up && !down {
                return Err(Error::NotMonotone);
            }
            return Ok(constant_branch(&pts, i, l, down && !up));
        }
        Monotonicity::Neither => return Err(Error::NotMonotone),
    };
    if decreasing {
        for p in &mut pts {
            p.1 = -p.1.clone();
        }
    }
    let secant = (&pts[pts.len() - 1].1 - &pts[0].1) / (b - a);
    if !(l.is_positive() && l > &secant.abs()) {
        return Err(Error::LipschitzTooSmall);
    }
    // g(t) = f(t) - L t, maximised at a breakpoint; ā is the last maximiser.
    let g: Vec<(Rational, Rational)> = pts.iter().map(|(x, v)| (x.clone(), v - l * x)).collect();
    let mut imax = 0;
    for (i, p) in g.iter().enumerate() {
        if p.1 >= g[imax].1 {
            imax = i;
        }
    }
    let a_bar = g[imax].0.clone();
    let tail = &g[imax..];
    let comps = rising_sun_points(tail);
    let p = GapSet::new(a_bar.clone(), b.clone(), comps.clone(), Generator::Explicit)?;

    // Points of P: model breakpoints outside every component plus component endpoints.
    let mut points: Vec<(Rational, Rational)> = Vec::new();
    for (x, v) in &pts[imax..] {
        if p.contains(x) {
            points.push((x.clone(), v.clone()));
        }
    }
    for (c, d) in &comps {
        for e in [c, d] {
            if !points.iter().any(|(x, _)| x == e) {
                points.push((e.clone(), value_on(&pts, e)));
            }
        }
    }
    points.sort();
    let (checked, failed) = pairwise_lipschitz(&points, l);
    let f_a_bar = pts[imax].1.clone();
    let f_b = pts[pts.len() - 1].1.clone();
    let bound = (&f_b - &f_a_bar) / l;
    let gap_length_sum = p.gap_length_sum();
    let points = if decreasing { points.into_iter().map(|(x, v)| (x, -v)).collect() } else { points };
    Ok(LipschitzCertificate {
        p,
        l: l.clone(),
        a_bar,
        b: b.clone(),
        f_a_bar,
        f_b,
        decreasing,
        branch: LipschitzBranch::RisingSun,
        gap_length_sum,
        bound,
        points,
        pairwise_checked: checked,
        pairwise_failed: failed,
    })
}

fn constant_branch(pts: &[(Rational, Rational)], i: usize, l: &Rational, decreasing: bool) -> LipschitzCertificate {
    // Extend the flat segment as far as it goes.
    let (mut lo, mut hi) = (i, i + 1);
    while lo > 0 && pts[lo - 1].1 == pts[i].1 {
        lo -= 1;
    }
    while hi + 1 < pts.len() && pts[hi + 1].1 == pts[i].1 {
        hi += 1;
    }
    let points: Vec<(Rational, Rational)> = pts[lo..=hi].to_vec();
    let (checked, failed) = pairwise_lipschitz(&points, l);
    let c = pts[lo].0.clone();
    let d = pts[hi].0.clone();
    LipschitzCertificate {
        p: GapSet::interval(c.clone(), d.clone()).expect("c < d"),
        l: l.clone(),
        a_bar: c,
        b: d,
        f_a_bar: pts[i].1.clone(),
        f_b: pts[i].1.clone(),
        decreasing,
        branch: LipschitzBranch::Constant,
        gap_length_sum: Rational::zero(),
        bound: Rational::zero(),
        points,
        pairwise_checked: checked,
        pairwise_failed: failed,
    }
}

fn value_on(pts: &[(Rational, Rational)], x: &Rational) -> Rational {
    let i = pts.partition_point(|p| &p.0 < x);
    if pts[i].0 == *x {
        return pts[i].1.clone();
    }
    super::sampled::lerp(&pts[i - 1].0, &pts[i - 1].1, &pts[i].0, &pts[i].1, x)
}

/// Exhaustive `|f(y) - f(x)| <= L |y - x|` over all pairs; returns (checked, failed).
pub fn pairwise_lipschitz(points: &[(Rational, Rational)], l: &Rational) -> (u64, u64) {
    let mut checked = 0;
    let mut failed = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            checked += 1;
            let (x, fx) = &points[i];
            let (y, fy) = &points[j];
            if (fy - fx).abs() > l * (y - x).abs() {
                failed += 1;
            }
        }
    }
    (checked, failed)
}
