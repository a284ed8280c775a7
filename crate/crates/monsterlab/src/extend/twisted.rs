use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::jarnik::{jarnik_extend, JarnikExtension};
use super::setfn::SetFunction;
use crate::evalcore::{rational_to_f64, Ball, Rational};
use crate::{Error, Result};

/// A differentiable evaluator with one sampled decrease and one sampled increase:
/// `m(down + step) < m(down)` and `m(up + step) > m(up)`.
pub struct TwistSource<'a> {
    pub eval: &'a dyn Fn(f64) -> Result<Ball>,
    pub down: f64,
    pub up: f64,
    pub step: f64,
}

impl<'a> TwistSource<'a> {
    /// First grid points `lo + j·step` (`j < count`) where the sampled increment is
    /// certainly negative, resp. certainly positive. Points where `eval` fails are skipped.
    pub fn scan(eval: &'a dyn Fn(f64) -> Result<Ball>, lo: f64, step: f64, count: usize) -> Result<TwistSource<'a>> {
        let mut down = None;
        let mut up = None;
        let mut prev: Option<(f64, Ball)> = None;
        for j in 0..=count {
            let u = lo + step * j as f64;
            let Ok(v) = eval(u) else {
                prev = None;
                continue;
            };
            if let Some((u0, v0)) = prev {
                let d = v - v0;
                if down.is_none() && d.certainly_negative() {
                    down = Some(u0);
                }
                if up.is_none() && d.certainly_positive() {
                    up = Some(u0);
                }
            }
            if let (Some(down), Some(up)) = (down, up) {
                return Ok(TwistSource { eval, down, up, step });
            }
            prev = Some((u, v));
        }
        Err(Error::NotMonotone)
    }
}

/// Knobs for [`twisted_extend`].
#[derive(Clone, Debug, PartialEq)]
pub struct TwistSettings {
    /// Dyadic depth of the non-monotonicity scan on each gap.
    pub resolution: u32,
    /// Extra attempts; each halves the window widths.
    pub retries: usize,
}

impl Default for TwistSettings {
    fn default() -> Self {
        TwistSettings { resolution: 6, retries: 4 }
    }
}

/// An interval `[lo, hi]` carrying `e·β·σ(gain·(m(u) - m(u_ref)))`, `u` affine from
/// `[lo, hi]` onto `[u_ref - step, u_ref + 2 step]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistWindow {
    pub lo: f64,
    pub hi: f64,
    pub u_ref: f64,
}

/// Scan outcome on one gap of the carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistGap {
    pub a: Rational,
    pub b: Rational,
    /// Bound on `|F'|` over the gap, from the closed form.
    pub slope_bound: f64,
    pub windows: Vec<TwistWindow>,
    /// Dyadic cells on which the samples were monotone.
    pub monotone_cells: Vec<usize>,
}

/// `F̂ = F + e·m̃` over the Jarník extension `F`.
#[derive(Clone, Debug)]
pub struct TwistedExtension {
    pub base: JarnikExtension,
    pub settings: TwistSettings,
    pub down: f64,
    pub up: f64,
    pub step: f64,
    pub gain_down: f64,
    pub gain_up: f64,
    pub ref_down: Ball,
    pub ref_up: Ball,
    pub attempts: usize,
    pub gaps: Vec<TwistGap>,
}

/// `(x - a)²(b - x)²/(b - a)³` on `(a, b)`, zero elsewhere.
pub fn envelope(a: &Rational, b: &Rational, x: f64) -> Ball {
    let (af, bf) = (rational_to_f64(a), rational_to_f64(b));
    if x <= af || x >= bf {
        return Ball::ZERO;
    }
    let a = Ball::from_rational(a);
    let b = Ball::from_rational(b);
    let x = Ball::exact(x);
    let u = (x - a) * (b - x);
    (u.sqr() / (b - a).powi(3)).clamp_to(0.0, f64::INFINITY)
}

/// `exp(1 - 1/(1 - (2τ - 1)²))` on `(0, 1)`, zero elsewhere.
fn bump(tau: f64) -> Ball {
    if tau <= 0.0 || tau >= 1.0 {
        return Ball::ZERO;
    }
    let s = Ball::exact(2.0 * tau - 1.0);
    let den = Ball::ONE - s.sqr();
    if den.lo() <= 0.0 {
        return Ball::from_interval(0.0, 1.0);
    }
    (Ball::ONE - den.recip()).exp().clamp_to(0.0, 1.0)
}

fn squash(v: Ball) -> Ball {
    (v / (Ball::ONE + v.sqr()).sqrt()).clamp_to(-1.0, 1.0)
}

impl TwistedExtension {
    pub fn ok(&self) -> bool {
        self.gaps.iter().all(|g| g.monotone_cells.is_empty())
    }

    /// `e(x)·m̃(x)`; zero outside the windows, hence on the carrier. Never fails: an
    /// evaluator error widens the result to `±e(x)β`.
    pub fn twist(&self, x: f64, mon: &dyn Fn(f64) -> Result<Ball>) -> Ball {
        let Some(g) = self.gaps.iter().find(|g| rational_to_f64(&g.a) < x && x < rational_to_f64(&g.b)) else {
            return Ball::ZERO;
        };
        let i = g.windows.partition_point(|w| w.hi <= x);
        let Some(w) = g.windows.get(i).filter(|w| w.lo < x) else {
            return Ball::ZERO;
        };
        let tau = (x - w.lo) / (w.hi - w.lo);
        let u = w.u_ref + self.step * (3.0 * tau - 1.0);
        let (gain, reference) = if w.u_ref == self.down { (self.gain_down, self.ref_down) } else { (self.gain_up, self.ref_up) };
        let damp = envelope(&g.a, &g.b, x) * bump(tau);
        if damp.hi() == 0.0 {
            return Ball::ZERO;
        }
        // Where the evaluator fails only `|m̃| <= 1` is known.
        let m = match mon(u) {
            Ok(m) => squash((m - reference).mul_f64(gain)),
            Err(_) => Ball::from_interval(-1.0, 1.0),
        };
        damp * m
    }

    pub fn eval(&self, x: f64, mon: &dyn Fn(f64) -> Result<Ball>) -> Ball {
        self.base.eval.eval(x) + self.twist(x, mon)
    }
}

/// Bound on `|F'|` over the carrier gap `(a, b)`: gap slope plus the largest spike height.
fn slope_bound(base: &JarnikExtension, a: &Rational, b: &Rational) -> f64 {
    let mut m = Rational::zero();
    for ad in base.adjustors.iter().filter(|ad| &ad.a >= a && &ad.b <= b) {
        for h in [&ad.h_a, &ad.h_b] {
            if h.abs() > m {
                m = h.abs();
            }
        }
    }
    let s = base.adjustors.iter().find(|ad| &ad.a == a).map(|ad| ad.slope.abs()).unwrap_or_default();
    rational_to_f64(&(s + m)) * (1.0 + 1e-9)
}

/// A differentiable extension sampled non-monotone on every dyadic cell (to
/// `resolution`) of every carrier gap.
///
/// In each cell two adjacent windows near the cell's three-quarter point carry
/// rescaled copies of the evaluator around its sampled decrease and increase, damped
/// by a `C^∞` bump and by the envelope `e`; the squash `v / sqrt(1 + v²)` keeps
/// `|F̂ - F| ≤ e`. Window widths are set so the twist swing dominates `|F'|`; retries
/// halve them. The last attempt is returned whether or not it passed.
pub fn twisted_extend(f: &SetFunction, src: &TwistSource<'_>, settings: &TwistSettings) -> Result<TwistedExtension> {
    if settings.resolution > 12 {
        return Err(Error::Invalid("resolution at most 12".into()));
    }
    if !(src.step > 0.0) {
        return Err(Error::BadScales);
    }
    let base = jarnik_extend(f)?;
    let ref_down = (src.eval)(src.down)?;
    let ref_up = (src.eval)(src.up)?;
    let d_down = ((src.eval)(src.down + src.step)? - ref_down).mag();
    let d_up = ((src.eval)(src.up + src.step)? - ref_up).mag();
    if d_down == 0.0 || d_up == 0.0 {
        return Err(Error::NotMonotone);
    }
    let mut tw = TwistedExtension {
        base,
        settings: settings.clone(),
        down: src.down,
        up: src.up,
        step: src.step,
        gain_down: 1.0 / d_down,
        gain_up: 1.0 / d_up,
        ref_down,
        ref_up,
        attempts: 0,
        gaps: Vec::new(),
    };
    let cells = 1usize << settings.resolution;
    loop {
        let shrink = libm::ldexp(1.0, -(tw.attempts as i32));
        tw.attempts += 1;
        tw.gaps.clear();
        for (a, b) in &tw.base.f.carrier.gaps {
            let (af, bf) = (rational_to_f64(a), rational_to_f64(b));
            let sb = slope_bound(&tw.base, a, b);
            let mut windows = Vec::with_capacity(2 * cells);
            for c in 0..cells {
                let lo = af + (bf - af) * c as f64 / cells as f64;
                let hi = af + (bf - af) * (c + 1) as f64 / cells as f64;
                let xc = lo + 0.75 * (hi - lo);
                let e = envelope(a, b, xc).lo();
                let width = ((hi - lo) / 8.0).min(e / (8.0 * (sb + 1.0))) * shrink;
                windows.push(TwistWindow { lo: xc - width, hi: xc, u_ref: src.down });
                windows.push(TwistWindow { lo: xc, hi: xc + width, u_ref: src.up });
            }
            tw.gaps.push(TwistGap { a: a.clone(), b: b.clone(), slope_bound: sb, windows, monotone_cells: Vec::new() });
        }
        let mut all_ok = true;
        for gi in 0..tw.gaps.len() {
            let mut monotone_cells = Vec::new();
            for c in 0..cells {
                let (wd, wu) = (tw.gaps[gi].windows[2 * c], tw.gaps[gi].windows[2 * c + 1]);
                // Preimages of u_ref and u_ref + step in each window, plus the window ends.
                let mut xs = alloc::vec![wd.lo];
                for w in [wd, wu] {
                    let len = w.hi - w.lo;
                    xs.extend([w.lo + len / 3.0, w.lo + 2.0 * len / 3.0, w.hi]);
                }
                let mut vals = Vec::with_capacity(xs.len());
                for &x in &xs {
                    vals.push(tw.eval(x, src.eval));
                }
                let up = vals.windows(2).any(|w| (w[1] - w[0]).certainly_positive());
                let down = vals.windows(2).any(|w| (w[1] - w[0]).certainly_negative());
                if !(up && down) {
                    monotone_cells.push(c);
                }
            }
            all_ok &= monotone_cells.is_empty();
            tw.gaps[gi].monotone_cells = monotone_cells;
        }
        if all_ok || tw.attempts > settings.retries {
            return Ok(tw);
        }
    }
}
