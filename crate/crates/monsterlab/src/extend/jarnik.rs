use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::piecewise::{line, Piece, PieceKind, PiecewiseEval};
use super::setfn::{hat_f, SetFunction};
use crate::evalcore::{format_rational, int, rpow, RatPoly, Rational};
use crate::perfectsets::SweepReport;
use crate::{Error, Result};

/// Adjustor data on one gap `(a, b)` of `hat(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjustor {
    /// Position in the enumeration by decreasing length, from 1.
    pub index: usize,
    pub a: Rational,
    pub b: Rational,
    /// `min(1, b - a)`.
    pub ell: Rational,
    pub eps: Rational,
    pub slope: Rational,
    /// Spike heights `h(a)`, `h(b)`.
    pub h_a: Rational,
    pub h_b: Rational,
    pub s: Rational,
    pub t: Rational,
    /// Tent slopes `A`, `B`.
    pub coef_a: Rational,
    pub coef_b: Rational,
    /// `h` on `[a, b]`: linear pieces `(lo, hi, poly)`.
    pub h_pieces: Vec<(Rational, Rational, RatPoly)>,
    /// `g = ∫_a h` on `[a, b]`: quadratic pieces.
    pub g_pieces: Vec<(Rational, Rational, RatPoly)>,
}

impl Adjustor {
    pub fn eps_sq(&self) -> Rational {
        &self.eps * &self.eps
    }

    fn integral_over(&self, lo: &Rational, hi: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (u, v, p) in &self.h_pieces {
            if u >= lo && v <= hi {
                let q = p.integral();
                acc += q.eval(v) - q.eval(u);
            }
        }
        acc
    }

    /// `∫_a^{a+ε²} h`.
    pub fn balance_left(&self) -> Rational {
        self.integral_over(&self.a, &(&self.a + self.eps_sq()))
    }

    /// `∫_{b-ε²}^b h`.
    pub fn balance_right(&self) -> Rational {
        self.integral_over(&(&self.b - self.eps_sq()), &self.b)
    }

    /// Exact `sup |g|` over `[a, b]`: piece endpoints and interior critical points.
    pub fn g_sup(&self) -> Rational {
        let mut best = Rational::zero();
        for (u, v, g) in &self.g_pieces {
            let mut cands = alloc::vec![u.clone(), v.clone()];
            let d = g.derivative();
            if d.degree() == 1 && !d.coeffs[1].is_zero() {
                let r = -&d.coeffs[0] / &d.coeffs[1];
                if u < &r && &r < v {
                    cands.push(r);
                }
            }
            for c in cands {
                let m = g.eval(&c).abs();
                if m > best {
                    best = m;
                }
            }
        }
        best
    }

    /// `D⁺g(a)` from the closed form.
    pub fn d_plus_g_a(&self) -> Rational {
        let (u, _, g) = &self.g_pieces[0];
        g.derivative().eval(u)
    }

    /// `D⁻g(b)` from the closed form.
    pub fn d_minus_g_b(&self) -> Rational {
        let (_, v, g) = &self.g_pieces[self.g_pieces.len() - 1];
        g.derivative().eval(v)
    }

    /// `½|h(a)|(s - a) < ε²` and `½|h(b)|(b - t) < ε²`.
    pub fn area_bounds_hold(&self) -> bool {
        let e2 = self.eps_sq();
        let half = Rational::one() / int(2);
        &half * self.h_a.abs() * (&self.s - &self.a) < e2 && &half * self.h_b.abs() * (&self.b - &self.t) < e2
    }

    pub fn eps_in_range(&self) -> bool {
        self.eps.is_positive() && self.eps < rpow(&int(3), -(self.index as i32)) * &self.ell
    }
}

/// `F = f̄ + g` together with its adjustors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JarnikExtension {
    pub f: SetFunction,
    pub hat: SetFunction,
    /// One per gap of `hat(Q)`, in left-to-right order.
    pub adjustors: Vec<Adjustor>,
    pub eval: PiecewiseEval,
}

impl JarnikExtension {
    /// Exact checks of the closed form: carrier values, balancing integrals,
    /// one-sided derivative identities, `|g| ≤ ε²`, area bounds and the range of `ε`.
    pub fn certify(&self) -> SweepReport {
        let mut rep = SweepReport::default();
        for j in &self.f.jets {
            rep.cases += 1;
            if self.eval.eval_exact(&j.point).as_ref() != Some(j.value()) {
                rep.fail(|| format!("F != f at {}", format_rational(&j.point)));
            }
        }
        for ad in &self.adjustors {
            let at = || format!("gap {} ({}, {})", ad.index, format_rational(&ad.a), format_rational(&ad.b));
            let fa = self.hat.jet(&ad.a).map(|j| &j.derivs[1] - &ad.slope);
            let fb = self.hat.jet(&ad.b).map(|j| &j.derivs[1] - &ad.slope);
            let checks: [(&str, bool); 7] = [
                ("balance at a", ad.balance_left().is_zero()),
                ("balance at b", ad.balance_right().is_zero()),
                ("D+g(a)", fa.as_ref() == Some(&ad.h_a) && ad.d_plus_g_a() == ad.h_a),
                ("D-g(b)", fb.as_ref() == Some(&ad.h_b) && ad.d_minus_g_b() == ad.h_b),
                ("|g| <= eps^2", ad.g_sup() <= ad.eps_sq()),
                ("area bound", ad.area_bounds_hold()),
                ("eps range", ad.eps_in_range()),
            ];
            for (name, ok) in checks {
                rep.cases += 1;
                if !ok {
                    rep.fail(|| format!("{name} fails on {}", at()));
                }
            }
        }
        rep
    }

    /// `g(x)` (zero off the gaps of `hat(Q)`).
    pub fn g(&self, x: &Rational) -> Rational {
        for ad in &self.adjustors {
            if &ad.a < x && x < &ad.b {
                for (u, v, p) in &ad.g_pieces {
                    if u <= x && x <= v {
                        return p.eval(x);
                    }
                }
            }
        }
        Rational::zero()
    }
}

/// Jarník's differentiable extension of an order-1 set function.
pub fn jarnik_extend(f: &SetFunction) -> Result<JarnikExtension> {
    if f.order < 1 {
        return Err(Error::MissingJet("jarnik_extend needs first derivatives".into()));
    }
    let fh = hat_f(f)?;
    let gaps = &fh.carrier.gaps;
    let mut by_len: Vec<usize> = (0..gaps.len()).collect();
    by_len.sort_by(|&i, &j| (&gaps[j].1 - &gaps[j].0).cmp(&(&gaps[i].1 - &gaps[i].0)).then(i.cmp(&j)));
    let mut adjustors: Vec<Option<Adjustor>> = alloc::vec![None; gaps.len()];
    for (rank, &k) in by_len.iter().enumerate() {
        adjustors[k] = Some(build_adjustor(&fh, k, rank + 1)?);
    }
    let adjustors: Vec<Adjustor> = adjustors.into_iter().map(|a| a.expect("every gap ranked")).collect();

    let eval = f.assemble(|k| {
        let mut out = Vec::new();
        let left = &adjustors[2 * k];
        let right = &adjustors[2 * k + 1];
        push_gap(&mut out, &fh, left)?;
        let p = left.b.clone();
        let q = right.a.clone();
        let fp = fh.jet(&p).expect("middle third jet").value().clone();
        out.push(Piece { lo: p.clone(), hi: q, kind: PieceKind::Poly(line(&p, &fp, &left.slope)) });
        push_gap(&mut out, &fh, right)?;
        Ok(out)
    })?;
    Ok(JarnikExtension { f: f.clone(), hat: fh, adjustors, eval })
}

fn push_gap(out: &mut Vec<Piece>, fh: &SetFunction, ad: &Adjustor) -> Result<()> {
    let fa = fh.jet(&ad.a).ok_or_else(|| Error::MissingJet(format_rational(&ad.a)))?.value().clone();
    let base = line(&ad.a, &fa, &ad.slope);
    for (u, v, g) in &ad.g_pieces {
        out.push(Piece { lo: u.clone(), hi: v.clone(), kind: PieceKind::Poly(base.add(g)) });
    }
    Ok(())
}

/// `sup_{0<|u|≤ε} |f'(x0) - (P(x0+u) - f(x0))/u|` bounded through the Taylor coefficients of `P` at `x0`.
fn quotient_bound(p: &RatPoly, x0: &Rational, value: &Rational, deriv: &Rational, eps: &Rational) -> Option<Rational> {
    let c = p.shift(x0).coeffs;
    if c[0] != *value {
        return None;
    }
    let c1 = c.get(1).cloned().unwrap_or_else(Rational::zero);
    let mut acc = (c1 - deriv).abs();
    let mut pow = eps.clone();
    for ck in c.iter().skip(2) {
        acc += ck.abs() * &pow;
        pow *= eps;
    }
    Some(acc)
}

/// The polynomial of `f̂` just left (`left = true`) or right of an endpoint, with the room it covers.
fn side_model(fh: &SetFunction, x: &Rational, left: bool) -> Result<(RatPoly, Option<Rational>)> {
    let (lt, rt) = fh.tails()?;
    if left {
        if x == &fh.carrier.lo {
            return Ok((lt, None));
        }
        let p = fh.piece_ending_at(x).ok_or_else(|| Error::Invalid(format!("isolated carrier point {}", format_rational(x))))?;
        Ok((p.poly.clone(), Some(x - &p.lo)))
    } else {
        if x == &fh.carrier.hi {
            return Ok((rt, None));
        }
        let p = fh.piece_starting_at(x).ok_or_else(|| Error::Invalid(format!("isolated carrier point {}", format_rational(x))))?;
        Ok((p.poly.clone(), Some(&p.hi - x)))
    }
}

fn build_adjustor(fh: &SetFunction, k: usize, index: usize) -> Result<Adjustor> {
    let (a, b) = fh.carrier.gaps[k].clone();
    let ja = fh.jet(&a).ok_or_else(|| Error::MissingJet(format_rational(&a)))?;
    let jb = fh.jet(&b).ok_or_else(|| Error::MissingJet(format_rational(&b)))?;
    let slope = (jb.value() - ja.value()) / (&b - &a);
    let h_a = &ja.derivs[1] - &slope;
    let h_b = &jb.derivs[1] - &slope;
    let one = Rational::one();
    let ell = if &b - &a < one { &b - &a } else { one.clone() };
    let tol = rpow(&int(3), -(index as i32));
    let mut cap = &tol * &ell;

    // Conditions (a) at a (points to its left) and (b) at b (points to its right).
    let (pa, room_a) = side_model(fh, &a, true)?;
    let (pb, room_b) = side_model(fh, &b, false)?;
    for r in [room_a, room_b].into_iter().flatten() {
        if r < cap {
            cap = r;
        }
    }
    let mut eps = None;
    let two = int(2);
    let mut c = cap;
    for _ in 0..=256 {
        let ok_a = quotient_bound(&pa, &a, ja.value(), &ja.derivs[1], &c).is_some_and(|v| v < tol);
        let ok_b = quotient_bound(&pb, &b, jb.value(), &jb.derivs[1], &c).is_some_and(|v| v < tol);
        if ok_a && ok_b {
            eps = Some(&c / &two);
            break;
        }
        c /= &two;
    }
    let eps = eps.ok_or(Error::Epsilon(index))?;
    let e2 = &eps * &eps;

    let width = |h: &Rational| {
        let w1 = &e2 / (h.abs() + &one);
        let w2 = &e2 / &two;
        if w1 < w2 {
            w1
        } else {
            w2
        }
    };
    let w_a = width(&h_a);
    let w_b = width(&h_b);
    let s = &a + &w_a;
    let t = &b - &w_b;
    let la = &e2 - &w_a;
    let lb = &e2 - &w_b;
    // Zero integral: h(a) w / 2 + A L² / 4 = 0.
    let coef_a = -&two * &h_a * &w_a / (&la * &la);
    let coef_b = -&two * &h_b * &w_b / (&lb * &lb);

    let mut h_pieces = Vec::new();
    let ae = &a + &e2;
    let be = &b - &e2;
    if !h_a.is_zero() {
        let ma = (&s + &ae) / &two;
        h_pieces.push((a.clone(), s.clone(), line(&a, &h_a, &(-&h_a / &w_a))));
        h_pieces.push((s.clone(), ma.clone(), line(&s, &Rational::zero(), &coef_a)));
        h_pieces.push((ma, ae.clone(), line(&ae, &Rational::zero(), &-coef_a.clone())));
    }
    let mid_lo = if h_a.is_zero() { a.clone() } else { ae };
    let mid_hi = if h_b.is_zero() { b.clone() } else { be.clone() };
    h_pieces.push((mid_lo, mid_hi, RatPoly::zero()));
    if !h_b.is_zero() {
        let mb = (&be + &t) / &two;
        h_pieces.push((be.clone(), mb.clone(), line(&be, &Rational::zero(), &coef_b)));
        h_pieces.push((mb, t.clone(), line(&t, &Rational::zero(), &-coef_b.clone())));
        h_pieces.push((t.clone(), b.clone(), line(&t, &Rational::zero(), &(&h_b / &w_b))));
    }

    let mut g_pieces = Vec::with_capacity(h_pieces.len());
    let mut g0 = Rational::zero();
    for (u, v, h) in &h_pieces {
        let big = h.integral();
        let offset = &g0 - big.eval(u);
        let g = big.add(&RatPoly::new(alloc::vec![offset]));
        g0 = g.eval(v);
        g_pieces.push((u.clone(), v.clone(), g));
    }

    Ok(Adjustor { index, a, b, ell, eps, slope, h_a, h_b, s, t, coef_a, coef_b, h_pieces, g_pieces })
}

/// One carrier point and direction of the difference-quotient schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdiffRow {
    pub x: Rational,
    /// `true` for `y > x`.
    pub right: bool,
    /// Finest scale `2^{-kmax}` used on this row.
    pub kmax: u32,
    /// For `m = 1..=mmax`: the least `k0` with the bound holding for every `k ∈ [k0, kmax]`.
    pub k_m: Vec<Option<u32>>,
    /// Pairs `(m, k)`, `k` up to the report's `kmax`, where `y = x ± 2^{-k}` lies inside a
    /// δ admitted for `ε = 3^{-m}`: no gap of index `< m` between `x` and `y`, and the
    /// quotient of the interpolation `F - g` within `ε` at this and every finer scale of
    /// the row. On each of these the quotient of `F` must be within `5ε`.
    pub admitted: u32,
    pub admitted_failed: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdiffReport {
    pub kmax: u32,
    pub mmax: u32,
    pub rows: Vec<FdiffRow>,
}

impl FdiffReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.admitted_failed == 0 && r.k_m.iter().all(Option::is_some))
    }
}

/// Bits of `2^k ≥ 1/r` for positive `r`.
fn log2_ceil_inv(r: &Rational) -> u32 {
    let q = r.denom() / r.numer();
    (q.bits() as u32) + 1
}

/// Step below which the quotient on the side model `p` of `x` stays under `r`:
/// `Σ_{k≥2} |c_k| δ^{k-1} ≤ δ Σ |c_k|` for `δ ≤ 1`, capped by the room the model covers.
fn model_scale(p: &RatPoly, x: &Rational, room: Option<Rational>, r: &Rational) -> Rational {
    let curv = p.shift(x).coeffs.iter().skip(2).fold(Rational::zero(), |acc, c| acc + c.abs());
    let mut d = r / (curv + Rational::one());
    if d > Rational::one() {
        d = Rational::one();
    }
    match room {
        Some(room) if room < d => room,
        _ => d,
    }
}

/// `|f'(x) - (F(y) - f(x))/(y - x)| < 5·3^{-m}` at `y = x ± 2^{-k}`, exactly, at every
/// carrier jet point and both directions.
///
/// Each row runs to `kmax` or further when the local data need it: towards an adjacent
/// gap the quotient only settles inside the first spike piece of width `w`, so the row
/// goes on to `2^{-k} < 2w·3^{-mmax}/(|h| + 1)`; into a carrier component it goes on until
/// the curvature of the model there is below the finest bound.
pub fn fdiff_schedule(ext: &JarnikExtension, kmax: u32, mmax: u32) -> FdiffReport {
    let f = &ext.f;
    let finest = rpow(&int(3), -(mmax as i32));
    let tails = f.tails().ok();
    let mut rows = Vec::new();
    for j in &f.jets {
        let x = &j.point;
        for right in [true, false] {
            let adj = ext.adjustors.iter().find(|ad| if right { &ad.a == x } else { &ad.b == x });
            let step = match adj {
                Some(ad) => {
                    let (h, w) = if right { (&ad.h_a, &ad.s - &ad.a) } else { (&ad.h_b, &ad.b - &ad.t) };
                    Some(int(2) * w * &finest / (h.abs() + Rational::one()))
                }
                None => {
                    let side = if right {
                        f.piece_starting_at(x).map(|p| (p.poly.clone(), Some(&p.hi - x)))
                    } else {
                        f.piece_ending_at(x).map(|p| (p.poly.clone(), Some(x - &p.lo)))
                    };
                    let side = side.or_else(|| match (&tails, right) {
                        (Some((_, rt)), true) if x == &f.carrier.hi => Some((rt.clone(), None)),
                        (Some((lt, _)), false) if x == &f.carrier.lo => Some((lt.clone(), None)),
                        _ => None,
                    });
                    side.map(|(p, room)| model_scale(&p, x, room, &(int(2) * &finest)))
                }
            };
            let row_kmax = step.map_or(kmax, |d| kmax.max(log2_ceil_inv(&d) + 1));
            let mut errs = Vec::new();
            let mut bar_errs = Vec::new();
            // Least gap index met between x and y.
            let mut crossed = Vec::new();
            for k in 0..=row_kmax {
                let step = rpow(&int(2), -(k as i32));
                let y = if right { x + &step } else { x - &step };
                let fy = ext.eval.eval_exact(&y).expect("jarnik pieces are polynomials");
                let bar = &fy - ext.g(&y);
                errs.push((&j.derivs[1] - (fy - j.value()) / (&y - x)).abs());
                bar_errs.push((&j.derivs[1] - (bar - j.value()) / (&y - x)).abs());
                let (lo, hi) = if right { (x, &y) } else { (&y, x) };
                crossed.push(ext.adjustors.iter().filter(|ad| &ad.a < hi && &ad.b > lo).map(|ad| ad.index).min());
            }
            let (mut admitted, mut admitted_failed) = (0, 0);
            for m in 1..=mmax {
                let eps = rpow(&int(3), -(m as i32));
                let five = int(5) * &eps;
                let mut premise = true;
                for k in (0..=row_kmax).rev() {
                    premise = premise && bar_errs[k as usize] < eps && crossed[k as usize].is_none_or(|i| i >= m as usize);
                    if !premise {
                        break;
                    }
                    if k <= kmax {
                        admitted += 1;
                        if errs[k as usize] >= five {
                            admitted_failed += 1;
                        }
                    }
                }
            }
            let k_m = (1..=mmax)
                .map(|m| {
                    let bound = int(5) * rpow(&int(3), -(m as i32));
                    let mut k0 = None;
                    for k in (0..=row_kmax).rev() {
                        if errs[k as usize] < bound {
                            k0 = Some(k);
                        } else {
                            break;
                        }
                    }
                    k0
                })
                .collect();
            rows.push(FdiffRow { x: x.clone(), right, kmax: row_kmax, k_m, admitted, admitted_failed });
        }
    }
    FdiffReport { kmax, mmax, rows }
}
