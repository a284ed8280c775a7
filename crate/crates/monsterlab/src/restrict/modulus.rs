use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::lipschitz::{lipschitz_restriction, LipschitzCertificate};
use super::sampled::SampledFunction;
use super::from_components;
use crate::evalcore::{int, rat, rational_to_f64, Rational};
use crate::perfectsets::GapSet;
use crate::{Error, Result};

/// Sampled modulus of continuity of the difference quotient on a finite set.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusReport {
    pub points: usize,
    pub pairs: u64,
    /// `max |q(x, y)|` over sample pairs, exact.
    pub m_bound: Rational,
    /// `(δ, ω(δ))`: largest `|q(p) - q(p')|` over pairs of pairs within sup-distance `δ`.
    pub omega: Vec<(f64, f64)>,
    /// The four sample indices realising `ω` at the smallest scale, if any pair qualified.
    pub worst: Option<[usize; 4]>,
}

impl ModulusReport {
    pub fn omega_at_min(&self) -> f64 {
        self.omega.last().map_or(0.0, |p| p.1)
    }
}

/// Quotient modulus over the samples of `f` that lie in `Q`.
pub fn quotient_uc_scan(f: &SampledFunction, q: &GapSet, scales: &[f64]) -> Result<ModulusReport> {
    let pts: Vec<(Rational, Rational)> =
        f.samples.iter().filter(|s| q.contains(&s.x)).map(|s| (s.x.clone(), s.value.clone())).collect();
    modulus_of_points(&pts, scales)
}

/// Same on explicit sorted points. Scales must be positive and strictly decreasing.
///
/// `ω` is computed from the exact quotients rounded to `f64`; it is an estimate on
/// the sampled lattice only.
pub fn modulus_of_points(pts: &[(Rational, Rational)], scales: &[f64]) -> Result<ModulusReport> {
    let n = pts.len();
    if n < 2 {
        return Err(Error::TooFewSamples);
    }
    if scales.is_empty() || scales.iter().any(|s| !(*s > 0.0)) || scales.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::BadScales);
    }
    let xs: Vec<f64> = pts.iter().map(|p| rational_to_f64(&p.0)).collect();
    let mut m_bound = Rational::zero();
    let mut qv = alloc::vec![0.0f64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let q = (&pts[j].1 - &pts[i].1) / (&pts[j].0 - &pts[i].0);
            let a = q.abs();
            if a > m_bound {
                m_bound = a;
            }
            qv[i * n + j] = rational_to_f64(&q);
        }
    }
    let dmax = scales[0];
    let mut omega = alloc::vec![0.0f64; scales.len()];
    let mut worst: Option<[usize; 4]> = None;
    // Index windows of points within dmax.
    let lo_win: Vec<usize> = xs.iter().map(|&x| xs.partition_point(|&y| y < x - dmax)).collect();
    let hi_win: Vec<usize> = xs.iter().map(|&x| xs.partition_point(|&y| y <= x + dmax)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let qij = qv[i * n + j];
            for k in lo_win[i]..hi_win[i] {
                let dk = (xs[k] - xs[i]).abs();
                for l in lo_win[j].max(k + 1)..hi_win[j] {
                    if (k, l) <= (i, j) {
                        continue;
                    }
                    let d = dk.max((xs[l] - xs[j]).abs());
                    let diff = (qv[k * n + l] - qij).abs();
                    for (s, om) in scales.iter().zip(omega.iter_mut()) {
                        if d > *s {
                            break;
                        }
                        if diff > *om {
                            *om = diff;
                        }
                    }
                    if d <= scales[scales.len() - 1] && diff >= omega[scales.len() - 1] && diff > 0.0 {
                        worst = Some([i, j, k, l]);
                    }
                }
            }
        }
    }
    Ok(ModulusReport {
        points: n,
        pairs: (n * (n - 1) / 2) as u64,
        m_bound,
        omega: scales.iter().copied().zip(omega).collect(),
        worst,
    })
}

/// Knobs of [`differentiable_restriction`].
#[derive(Clone, Debug, PartialEq)]
pub struct Budget {
    /// Fewest carrier points that count as a carrier.
    pub m: usize,
    /// Target for `ω(δ_min)`.
    pub tol: f64,
    pub scales: Vec<f64>,
    /// Greedy point removals allowed.
    pub max_drops: usize,
    /// `L = factor · |secant slope|` in the monotone branch.
    pub lipschitz_factor: Rational,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            m: 64,
            tol: 1e-2,
            scales: alloc::vec![1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0],
            max_drops: 256,
            lipschitz_factor: int(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum CarrierBranch {
    /// Lipschitz restriction of a monotone run.
    Monotone(LipschitzCertificate),
    /// A flat segment of the model.
    Constant { value: Rational },
    /// Points where the model crosses a level.
    LevelSet { level: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DifferentiableRestriction {
    pub q: GapSet,
    pub branch: CarrierBranch,
    /// `(x, q̄(x, x))` estimated by the quotient with the nearest kept neighbour.
    pub derivatives: Vec<(Rational, f64)>,
    pub modulus: ModulusReport,
    pub carrier_points: usize,
    pub dropped: usize,
    /// Budget ran out before `ω(δ_min) <= tol`.
    pub unrefined: bool,
}

/// Carrier with a controlled quotient modulus, at sample resolution.
pub fn differentiable_restriction(f: &SampledFunction, a: &Rational, b: &Rational, budget: &Budget) -> Result<DifferentiableRestriction> {
    let model = f.model(a, b)?;
    let (branch, p, pts) = choose_carrier(&model, budget)?;
    let carrier_points = pts.len();
    let mut kept = alloc::vec![true; pts.len()];
    let mut dropped = 0;
    let mut current: Vec<(Rational, Rational)> = pts.clone();
    let mut report = modulus_of_points(&current, &budget.scales)?;
    while report.omega_at_min() > budget.tol && dropped < budget.max_drops && current.len() > budget.m {
        let Some(w) = report.worst else { break };
        // Try removing each point of the worst pair of pairs; keep the best outcome.
        let idx: Vec<usize> = kept.iter().enumerate().filter(|(_, k)| **k).map(|(i, _)| i).collect();
        let mut best: Option<(usize, ModulusReport)> = None;
        for &c in &w {
            let orig = idx[c];
            let trial: Vec<(Rational, Rational)> =
                idx.iter().filter(|&&i| i != orig).map(|&i| pts[i].clone()).collect();
            let r = modulus_of_points(&trial, &budget.scales)?;
            if best.as_ref().is_none_or(|b| r.omega_at_min() < b.1.omega_at_min()) {
                best = Some((orig, r));
            }
        }
        let (orig, r) = best.expect("four candidates");
        kept[orig] = false;
        dropped += 1;
        current = idx.iter().filter(|&&i| i != orig).map(|&i| pts[i].clone()).collect();
        report = r;
    }
    let unrefined = report.omega_at_min() > budget.tol;
    let q = match &branch {
        CarrierBranch::LevelSet { .. } => from_components(&current.iter().map(|(x, _)| (x.clone(), x.clone())).collect::<Vec<_>>())?,
        _ => carrier_set(&p, &pts, &kept)?,
    };
    let derivatives = nearest_quotients(&current);
    Ok(DifferentiableRestriction { q, branch, derivatives, modulus: report, carrier_points, dropped, unrefined })
}

#[allow(clippy::type_complexity)]
fn choose_carrier(model: &[(Rational, Rational)], budget: &Budget) -> Result<(CarrierBranch, GapSet, Vec<(Rational, Rational)>)> {
    // (1) longest strictly monotone run of breakpoints.
    let n = model.len();
    let mut best = (0usize, 1usize);
    let mut start = 0;
    let mut dir = core::cmp::Ordering::Equal;
    for i in 1..n {
        let d = model[i].1.cmp(&model[i - 1].1);
        if d.is_eq() {
            start = i;
        } else if !dir.is_eq() && d != dir {
            start = i - 1;
        }
        dir = d;
        if !d.is_eq() && i + 1 - start > best.1 - best.0 {
            best = (start, i + 1);
        }
    }
    if best.1 - best.0 >= budget.m.max(2) {
        let (s, e) = best;
        let (a, b) = (&model[s].0, &model[e - 1].0);
        let run = SampledFunction::piecewise_linear(model[s..e].to_vec())?;
        let secant = ((&model[e - 1].1 - &model[s].1) / (b - a)).abs();
        let l = &secant * &budget.lipschitz_factor;
        let cert = lipschitz_restriction(&run, a, b, &l)?;
        let pts = cert.points.clone();
        let p = cert.p.clone();
        return Ok((CarrierBranch::Monotone(cert), p, pts));
    }
    // (2) a flat segment.
    if let Some(i) = (1..n).find(|&i| model[i].1 == model[i - 1].1) {
        let mut e = i;
        while e + 1 < n && model[e + 1].1 == model[i].1 {
            e += 1;
        }
        let p = GapSet::interval(model[i - 1].0.clone(), model[e].0.clone())?;
        let pts = model[i - 1..=e].to_vec();
        return Ok((CarrierBranch::Constant { value: model[i].1.clone() }, p, pts));
    }
    // (3) the level crossed most often.
    let mut values: Vec<&Rational> = model.iter().map(|p| &p.1).collect();
    values.sort();
    values.dedup();
    let mut levels: Vec<Rational> = values.windows(2).map(|w| (w[0] + w[1]) / int(2)).collect();
    if levels.len() > 64 {
        let step = levels.len() as f64 / 64.0;
        levels = (0..64).map(|k| levels[(k as f64 * step) as usize].clone()).collect();
    }
    let mut best: Option<(Rational, Vec<(Rational, Rational)>)> = None;
    for c in levels {
        let pts = crossings(model, &c);
        if best.as_ref().is_none_or(|b| pts.len() > b.1.len()) {
            best = Some((c, pts));
        }
    }
    match best {
        Some((level, pts)) if pts.len() >= budget.m.max(2) => {
            let comps: Vec<(Rational, Rational)> = pts.iter().map(|(x, _)| (x.clone(), x.clone())).collect();
            let p = from_components(&comps)?;
            Ok((CarrierBranch::LevelSet { level }, p, pts))
        }
        _ => Err(Error::TooFewSamples),
    }
}

fn crossings(model: &[(Rational, Rational)], c: &Rational) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for w in model.windows(2) {
        let (x0, v0) = &w[0];
        let (x1, v1) = &w[1];
        if (v0 < c && v1 > c) || (v0 > c && v1 < c) {
            let x = x0 + (c - v0) * (x1 - x0) / (v1 - v0);
            out.push((x, c.clone()));
        }
    }
    out
}

/// `P` with the stretch between kept neighbours removed wherever a point was dropped.
fn carrier_set(p: &GapSet, pts: &[(Rational, Rational)], kept: &[bool]) -> Result<GapSet> {
    let keep: Vec<usize> = (0..pts.len()).filter(|&i| kept[i]).collect();
    let mut comps: Vec<(Rational, Rational)> = Vec::new();
    for w in keep.windows(2) {
        let (u, v) = (&pts[w[0]].0, &pts[w[1]].0);
        let contiguous = w[1] == w[0] + 1 && !p.gaps.iter().any(|(c, d)| c < v && d > u);
        match comps.last_mut() {
            Some(last) if contiguous && &last.1 == u => last.1 = v.clone(),
            _ if contiguous => comps.push((u.clone(), v.clone())),
            _ => {
                if comps.last().is_none_or(|l| &l.1 != u) {
                    comps.push((u.clone(), u.clone()));
                }
            }
        }
    }
    if let Some(&last) = keep.last() {
        let x = &pts[last].0;
        if comps.last().is_none_or(|l| &l.1 != x) {
            comps.push((x.clone(), x.clone()));
        }
    }
    from_components(&comps)
}

fn nearest_quotients(pts: &[(Rational, Rational)]) -> Vec<(Rational, f64)> {
    let n = pts.len();
    let q = |i: usize, j: usize| (&pts[j].1 - &pts[i].1) / (&pts[j].0 - &pts[i].0);
    (0..n)
        .map(|i| {
            let v = match (i.checked_sub(1), (i + 1 < n).then_some(i + 1)) {
                (Some(l), Some(r)) => {
                    let dl = &pts[i].0 - &pts[l].0;
                    let dr = &pts[r].0 - &pts[i].0;
                    if dl < dr {
                        q(l, i)
                    } else if dr < dl {
                        q(i, r)
                    } else {
                        (q(l, i) + q(i, r)) * rat(1, 2)
                    }
                }
                (Some(l), None) => q(l, i),
                (None, Some(r)) => q(i, r),
                (None, None) => Rational::zero(),
            };
            (pts[i].0.clone(), rational_to_f64(&v))
        })
        .collect()
}
