use alloc::vec::Vec;

use super::pompeiu::{g_prime_lower_on, g_prime_partial, h_shifted, pompeiu_g, pompeiu_h, PompeiuSpec};
use crate::evalcore::{diff_quotient, Ball};
use crate::{Error, Result};

/// Which of the two points `t + d`, `d` was placed on the image `g(q_a)` of an enumerated rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchoredSide {
    /// `t + d ≈ g(q_a)`, so `h'(t + d)` is small.
    Plus,
    /// `d - t ≈ g(q_a)`, so `h'(d - t)` is small.
    Minus,
}

/// Record for one witness `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessCert {
    pub d: f64,
    pub anchor: usize,
    pub side: AnchoredSide,
    /// Certified lower bound on `g'` over the enclosure of `h` at the anchored point.
    pub g_prime_lower: f64,
    /// Point estimate `1 / g'_N(h(d))` of `h'(d)`.
    pub h_prime_estimate: f64,
}

/// `f(x) = h(x - t) - h(x)` with a screened witness list.
#[derive(Clone, Debug)]
pub struct MonsterSpec {
    pub pompeiu: PompeiuSpec,
    pub t: f64,
    pub certs: Vec<WitnessCert>,
}

impl MonsterSpec {
    pub fn witnesses(&self) -> Vec<f64> {
        self.certs.iter().map(|c| c.d).collect()
    }
}

pub fn monster(spec: &MonsterSpec, x: f64) -> Result<Ball> {
    monster_eval(&spec.pompeiu, spec.t, x)
}

pub fn monster_eval(p: &PompeiuSpec, t: f64, x: f64) -> Result<Ball> {
    if t == 0.0 {
        return Ok(Ball::ZERO);
    }
    Ok(h_shifted(p, x, t)? - h_shifted(p, x, 0.0)?)
}

/// Forward difference quotients of the monster at `x` for scales `2^{-k}`, `k` in `ks`.
pub fn monster_quotients(p: &PompeiuSpec, t: f64, x: f64, ks: core::ops::RangeInclusive<i32>) -> Result<Vec<Ball>> {
    let fx = monster_eval(p, t, x)?;
    let mut out = Vec::new();
    for k in ks {
        let s = libm::ldexp(1.0, -k);
        let y = x + s;
        let q = diff_quotient(|z| if z == x { fx } else { monster_eval(p, t, z).unwrap_or(Ball::new(f64::NAN, f64::INFINITY)) }, y, x)?;
        out.push(q);
    }
    Ok(out)
}

/// Numerical-evidence sign test: every quotient has `|center| > 2 radius` and the given sign.
pub fn signs_hold(qs: &[Ball], positive: bool) -> bool {
    qs.iter().all(|q| {
        q.is_finite() && q.center.abs() > 2.0 * q.radius && (q.center > 0.0) == positive
    })
}

/// Search settings.
#[derive(Clone, Debug)]
pub struct MonsterSearch {
    /// Anchors `q_1, …, q_anchors`.
    pub anchors: usize,
    /// Candidate shifts.
    pub shifts: Vec<f64>,
    /// Exponent range for the screening quotients.
    pub ks: (i32, i32),
    pub wanted: usize,
    /// Minimum accepted estimate of `h'(d)`.
    pub h_prime_floor: f64,
}

impl Default for MonsterSearch {
    fn default() -> Self {
        MonsterSearch {
            anchors: 24,
            shifts: (1..=32).map(|j| j as f64 / 64.0 + 1.0 / 1024.0).collect(),
            ks: (12, 26),
            wanted: 8,
            h_prime_floor: 1e-3,
        }
    }
}

/// Pick a shift `t` and witnesses `d` whose quotient signs match at every screened scale.
///
/// Each witness has one side placed on `g(q_a)`; the other side is only screened
/// numerically. The first shift (in list order) reaching `wanted` witnesses wins;
/// otherwise the best one found is returned.
pub fn search_monster(p: &PompeiuSpec, cfg: &MonsterSearch) -> Result<MonsterSpec> {
    let anchors: Vec<(usize, f64)> = (1..=cfg.anchors.min(p.truncation()))
        .map(|a| (a, pompeiu_g(p, p.q_ball(a).center).center))
        .collect();
    let ks = cfg.ks.0..=cfg.ks.1;
    let mut best: Option<MonsterSpec> = None;
    for &t in &cfg.shifts {
        let mut certs = Vec::new();
        for &(a, ya) in &anchors {
            for side in [AnchoredSide::Plus, AnchoredSide::Minus] {
                let d = match side {
                    AnchoredSide::Plus => ya - t,
                    AnchoredSide::Minus => ya + t,
                };
                if certs.iter().any(|c: &WitnessCert| (c.d - d).abs() < 1e-9) {
                    continue;
                }
                let Some(cert) = screen(p, t, d, a, side, ks.clone(), cfg.h_prime_floor) else {
                    continue;
                };
                certs.push(cert);
                if certs.len() >= cfg.wanted {
                    break;
                }
            }
            if certs.len() >= cfg.wanted {
                break;
            }
        }
        let done = certs.len() >= cfg.wanted;
        if best.as_ref().is_none_or(|b| certs.len() > b.certs.len()) {
            best = Some(MonsterSpec { pompeiu: p.clone(), t, certs });
        }
        if done {
            break;
        }
    }
    best.ok_or(Error::Invalid("no shifts given".into()))
}

fn screen(
    p: &PompeiuSpec,
    t: f64,
    d: f64,
    anchor: usize,
    side: AnchoredSide,
    ks: core::ops::RangeInclusive<i32>,
    floor: f64,
) -> Option<WitnessCert> {
    let hd = pompeiu_h(p, d, 0.0).ok()?;
    let est = 1.0 / g_prime_partial(p, hd.x, p.truncation());
    if !(est > floor) {
        return None;
    }
    // Cheap look at the coarsest and finest scales first.
    let (k0, k1) = (*ks.start(), *ks.end());
    for k in [k0, k1] {
        let pos = monster_quotients(p, t, t + d, k..=k).ok()?;
        let neg = monster_quotients(p, t, d, k..=k).ok()?;
        if !signs_hold(&pos, true) || !signs_hold(&neg, false) {
            return None;
        }
    }
    let pos = monster_quotients(p, t, t + d, ks.clone()).ok()?;
    let neg = monster_quotients(p, t, d, ks).ok()?;
    if !signs_hold(&pos, true) || !signs_hold(&neg, false) {
        return None;
    }
    let anchored = match side {
        AnchoredSide::Plus => t + d,
        AnchoredSide::Minus => d - t,
    };
    let enc = pompeiu_h(p, anchored, 0.0).ok()?;
    let g_lower = g_prime_lower_on(p, enc.lo, enc.hi, p.truncation());
    Some(WitnessCert { d, anchor, side, g_prime_lower: g_lower, h_prime_estimate: est })
}
