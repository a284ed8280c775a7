use alloc::vec::Vec;

use num_traits::Signed;

use super::sampled::{monotonicity, Monotonicity, SampledFunction};
use super::intersect_intervals;
use crate::evalcore::{int, Rational};
use crate::perfectsets::GapSet;
use crate::{Error, Result};

/// Fewest samples a component of `P` needs before monotonicity on it is accepted.
pub const MIN_RUN: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotoneBranch {
    /// `f` is monotone on a component of `P` (or on all of `P`) at sample resolution.
    Monotone,
    /// Dyadic tree of separated intervals.
    Tree,
    /// Some tree node holds samples of a single value.
    Constant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneRestriction {
    pub q: GapSet,
    pub branch: MonotoneBranch,
    pub increasing: bool,
    /// Tree levels `0..=depth`; level `n` lists `I_s`, `s ∈ 2^n`, in address order.
    pub levels: Vec<Vec<(Rational, Rational)>>,
    /// Exhaustive pairwise check over the samples of `Q`.
    pub checked: u64,
    pub failed: u64,
}

impl MonotoneRestriction {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Closed `Q ⊂ P` on which the samples of `f` are monotone.
pub fn monotone_restriction(f: &SampledFunction, p: &GapSet, depth: usize) -> Result<MonotoneRestriction> {
    if depth == 0 || depth > 24 {
        return Err(Error::Invalid("depth must be in 1..=24".into()));
    }
    let pts: Vec<(Rational, Rational)> =
        f.samples.iter().filter(|s| p.contains(&s.x)).map(|s| (s.x.clone(), s.value.clone())).collect();
    if pts.len() < 2 {
        return Err(Error::TooFewSamples);
    }
    if let Some(r) = monotone_branch(&pts, p) {
        return Ok(r);
    }
    let mut constant: Option<(Rational, Rational)> = None;
    for increasing in [true, false] {
        match build_tree(&pts, p, depth, increasing) {
            Ok(levels) => {
                let leaves = &levels[depth];
                let q = intersect_intervals(p, leaves)?;
                let inside: Vec<&(Rational, Rational)> = pts.iter().filter(|(x, _)| q.contains(x)).collect();
                let (checked, failed) = pairwise_monotone(&inside, increasing);
                return Ok(MonotoneRestriction { q, branch: MonotoneBranch::Tree, increasing, levels, checked, failed });
            }
            Err(Some(iv)) if constant.is_none() => constant = Some(*iv),
            Err(_) => {}
        }
    }
    match constant {
        Some((l, r)) => {
            let q = intersect_intervals(p, &[(l, r)])?;
            let inside: Vec<&(Rational, Rational)> = pts.iter().filter(|(x, _)| q.contains(x)).collect();
            let (checked, failed) = pairwise_monotone_weak(&inside);
            Ok(MonotoneRestriction { q, branch: MonotoneBranch::Constant, increasing: true, levels: Vec::new(), checked, failed })
        }
        None => Err(Error::TooFewSamples),
    }
}

fn monotone_branch(pts: &[(Rational, Rational)], p: &GapSet) -> Option<MonotoneRestriction> {
    let vals: Vec<&Rational> = pts.iter().map(|x| &x.1).collect();
    let whole = monotonicity(&vals);
    if matches!(whole, Monotonicity::Increasing | Monotonicity::Decreasing) {
        let increasing = whole == Monotonicity::Increasing;
        let refs: Vec<&(Rational, Rational)> = pts.iter().collect();
        let (checked, failed) = pairwise_monotone(&refs, increasing);
        return Some(MonotoneRestriction { q: p.clone(), branch: MonotoneBranch::Monotone, increasing, levels: Vec::new(), checked, failed });
    }
    for (c, d) in p.components() {
        if c == d {
            continue;
        }
        let run: Vec<&(Rational, Rational)> = pts.iter().filter(|(x, _)| &c <= x && x <= &d).collect();
        if run.len() < MIN_RUN {
            continue;
        }
        let vals: Vec<&Rational> = run.iter().map(|x| &x.1).collect();
        let m = monotonicity(&vals);
        if matches!(m, Monotonicity::Increasing | Monotonicity::Decreasing) {
            let increasing = m == Monotonicity::Increasing;
            let (checked, failed) = pairwise_monotone(&run, increasing);
            let q = GapSet::interval(c, d).ok()?;
            return Some(MonotoneRestriction { q, branch: MonotoneBranch::Monotone, increasing, levels: Vec::new(), checked, failed });
        }
    }
    None
}

/// Levels of the tree, or the first node that could not be split (`Some` when it is constant).
type Span = (Rational, Rational);

fn build_tree(
    pts: &[(Rational, Rational)],
    p: &GapSet,
    depth: usize,
    increasing: bool,
) -> core::result::Result<Vec<Vec<Span>>, Option<Box<Span>>> {
    let mut levels = Vec::with_capacity(depth + 1);
    // Each node: its interval and the contiguous index range of the samples it holds.
    let mut nodes: Vec<((Rational, Rational), (usize, usize))> = alloc::vec![((p.lo.clone(), p.hi.clone()), (0, pts.len()))];
    levels.push(alloc::vec![(p.lo.clone(), p.hi.clone())]);
    for level in 0..depth {
        let mut next = Vec::with_capacity(nodes.len() * 2);
        let last = level + 1 == depth;
        for ((l, r), (s, e)) in &nodes {
            let len = r - l;
            match split(&pts[*s..*e], &len, increasing, last) {
                Some(((a0, a1), (b0, b1))) => {
                    let ia = (pts[s + a0].0.clone(), pts[s + a1 - 1].0.clone());
                    let ib = (pts[s + b0].0.clone(), pts[s + b1 - 1].0.clone());
                    next.push((ia, (s + a0, s + a1)));
                    next.push((ib, (s + b0, s + b1)));
                }
                None => {
                    let run = &pts[*s..*e];
                    let constant = run.len() >= 2 && run.iter().all(|x| x.1 == run[0].1);
                    return Err(if constant { Some(Box::new((run[0].0.clone(), run[run.len() - 1].0.clone()))) } else { None });
                }
            }
        }
        levels.push(next.iter().map(|(iv, _)| iv.clone()).collect());
        nodes = next;
    }
    Ok(levels)
}

/// Two disjoint runs, left one lower (increasing) or higher (decreasing), each spanning at most `len / 2`.
/// Leaves (`monotone_runs`) are also kept monotone in the chosen direction, since they are not split again.
#[allow(clippy::type_complexity)]
fn split(
    run: &[(Rational, Rational)],
    len: &Rational,
    increasing: bool,
    monotone_runs: bool,
) -> Option<((usize, usize), (usize, usize))> {
    if run.len() < 2 {
        return None;
    }
    let key = |i: usize| if increasing { run[i].1.clone() } else { -run[i].1.clone() };
    // Best gain key(j) - key(i) with i < j.
    let (mut lo, mut best) = (0usize, None::<(usize, usize, Rational)>);
    for j in 1..run.len() {
        if key(j) < key(lo) {
            lo = j;
            continue;
        }
        let g = key(j) - key(lo);
        if best.as_ref().is_none_or(|b| g > b.2) {
            best = Some((lo, j, g));
        }
    }
    let (u, w, gain) = best?;
    if gain <= Rational::from_integer(0.into()) {
        return None;
    }
    let t = (key(u) + key(w)) / int(2);
    let reach = len / int(4);
    let grow = |seed: usize, below: bool| {
        let ok = |i: usize| {
            let v = key(i);
            let side = if below { v < t } else { v > t };
            side && (&run[i].0 - &run[seed].0).abs() <= reach
        };
        let mut a = seed;
        while a > 0 && ok(a - 1) && (!monotone_runs || key(a - 1) < key(a)) {
            a -= 1;
        }
        let mut b = seed + 1;
        while b < run.len() && ok(b) && (!monotone_runs || key(b) > key(b - 1)) {
            b += 1;
        }
        (a, b)
    };
    Some((grow(u, true), grow(w, false)))
}

fn pairwise_monotone(pts: &[&(Rational, Rational)], increasing: bool) -> (u64, u64) {
    let mut checked = 0;
    let mut failed = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            checked += 1;
            let ok = if increasing { pts[i].1 < pts[j].1 } else { pts[i].1 > pts[j].1 };
            if !ok {
                failed += 1;
            }
        }
    }
    (checked, failed)
}

fn pairwise_monotone_weak(pts: &[&(Rational, Rational)]) -> (u64, u64) {
    let mut checked = 0;
    let mut failed = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            checked += 1;
            if pts[i].1 != pts[j].1 {
                failed += 1;
            }
        }
    }
    (checked, failed)
}
