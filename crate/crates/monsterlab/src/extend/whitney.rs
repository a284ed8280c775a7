use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::piecewise::{Piece, PieceKind, PiecewiseEval};
use super::setfn::SetFunction;
use super::Jet;
use crate::evalcore::{format_rational, int, rat, rational_to_f64, Ball, Rational};
use crate::{Error, Result};

/// Smooth step on `[1/3, 2/3]`, exact where it is flat.
pub fn psi_exact(t: &Rational) -> Option<Rational> {
    if t <= &rat(1, 3) {
        Some(Rational::zero())
    } else if t >= &rat(2, 3) {
        Some(Rational::one())
    } else {
        None
    }
}

/// `1 / (1 + exp(1/v - 1/(1-v)))` for `v ∈ (0, 1)`.
fn step_point(v: f64) -> Ball {
    if v <= 0.0 {
        return Ball::ZERO;
    }
    if v >= 1.0 {
        return Ball::ONE;
    }
    let v = Ball::exact(v);
    let e = v.recip() - (Ball::ONE - v).recip();
    if e.lo() > 700.0 {
        return Ball::from_interval(0.0, f64::MIN_POSITIVE);
    }
    if e.hi() < -700.0 {
        return Ball::from_interval(1.0 - f64::EPSILON, 1.0);
    }
    (Ball::ONE + e.exp()).recip().clamp_to(0.0, 1.0)
}

/// `ψ(t)`: 0 on `(-∞, 1/3]`, 1 on `[2/3, ∞)`, `C^∞` and nondecreasing.
pub fn psi(t: Ball) -> Ball {
    let v = t.mul_f64(3.0) - Ball::ONE;
    step_point(v.lo()).hull(step_point(v.hi()))
}

/// `q^{n-i}_{f^{(i)}}(a, b)` from two jets of order `n`.
fn q_jets(ja: &Jet, jb: &Jet, i: usize) -> Rational {
    if ja.point == jb.point {
        return Rational::zero();
    }
    let n = ja.order();
    let h = &jb.point - &ja.point;
    let mut acc = Rational::zero();
    let mut term = Rational::one();
    for k in 0..=(n - i) {
        if k > 0 {
            term = term * &h / int(k as i64);
        }
        acc += &ja.derivs[i + k] * &term;
    }
    let mut denom = Rational::one();
    for _ in 0..(n - i) {
        denom *= &h;
    }
    (&jb.derivs[i] - acc) / denom
}

/// `q^n_f(a, b) = (T^n_b f(b) - T^n_a f(b)) / (b - a)^n`, 0 on the diagonal.
pub fn q_fn(f: &SetFunction, a: &Rational, b: &Rational) -> Result<Rational> {
    let ja = f.jet(a).ok_or_else(|| Error::MissingJet(format_rational(a)))?;
    let jb = f.jet(b).ok_or_else(|| Error::MissingJet(format_rational(b)))?;
    Ok(q_jets(ja, jb, 0))
}

/// Per-derivative row of a [`WhitneyReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhitneyRow {
    /// Which `q^{n-i}_{f^{(i)}}`.
    pub i: usize,
    /// Band `k` holds pairs with `scales[k+1] ≤ |b - a| < scales[k]` (the last band has no lower limit).
    pub band_max: Vec<Option<Rational>>,
    pub band_min: Vec<Option<Rational>>,
    /// Ordered pair attaining the largest value in the finest nonempty band.
    pub worst: Option<(Rational, Rational)>,
    pub divergent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhitneyReport {
    pub order: usize,
    pub scales: Vec<Rational>,
    pub rows: Vec<WhitneyRow>,
    pub pairs: u64,
    pub divergent: bool,
    pub passed: bool,
}

/// Band maxima of `|q^{n-i}_{f^{(i)}}|` over ordered pairs of jet points, `i ≤ n`.
///
/// A row is divergent when its maxima grow strictly over the last three nonempty bands
/// and end above `tol`. The check passes when nothing diverges and every finest
/// nonempty band stays within `tol`.
pub fn whitney_check(f: &SetFunction, tol: &Rational, scales: &[Rational]) -> Result<WhitneyReport> {
    if scales.is_empty() || scales.iter().any(|s| !s.is_positive()) || scales.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::BadScales);
    }
    let n = f.order;
    let nb = scales.len();
    let mut band_max: Vec<Vec<Option<Rational>>> = alloc::vec![alloc::vec![None; nb]; n + 1];
    let mut band_min: Vec<Vec<Option<Rational>>> = alloc::vec![alloc::vec![None; nb]; n + 1];
    let mut arg: Vec<Vec<Option<(Rational, Rational)>>> = alloc::vec![alloc::vec![None; nb]; n + 1];
    let mut pairs = 0u64;
    let jets = &f.jets;
    for u in 0..jets.len() {
        for v in u + 1..jets.len() {
            let d = &jets[v].point - &jets[u].point;
            if d >= scales[0] {
                break;
            }
            let band = scales.partition_point(|s| s > &d) - 1;
            for (ja, jb) in [(&jets[u], &jets[v]), (&jets[v], &jets[u])] {
                pairs += 1;
                for i in 0..=n {
                    let q = q_jets(ja, jb, i).abs();
                    if band_max[i][band].as_ref().is_none_or(|m| &q > m) {
                        band_max[i][band] = Some(q.clone());
                        arg[i][band] = Some((ja.point.clone(), jb.point.clone()));
                    }
                    if band_min[i][band].as_ref().is_none_or(|m| &q < m) {
                        band_min[i][band] = Some(q);
                    }
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(n + 1);
    let mut passed = true;
    let mut divergent = false;
    for i in 0..=n {
        let filled: Vec<(usize, &Rational)> = band_max[i].iter().enumerate().filter_map(|(k, m)| m.as_ref().map(|m| (k, m))).collect();
        let tail = &filled[filled.len().saturating_sub(3)..];
        let div = tail.len() == 3 && tail.windows(2).all(|w| w[0].1 < w[1].1) && tail[2].1 > tol;
        let finest = filled.last();
        if div || finest.is_some_and(|(_, m)| *m > tol) {
            passed = false;
        }
        divergent |= div;
        rows.push(WhitneyRow {
            i,
            worst: finest.and_then(|(k, _)| arg[i][*k].clone()),
            band_max: band_max[i].clone(),
            band_min: band_min[i].clone(),
            divergent: div,
        });
    }
    Ok(WhitneyReport { order: n, scales: scales.to_vec(), rows, pairs, divergent, passed })
}

/// `f̄_j = α_j T^n_{a_j} f + β_j T^n_{b_j} f` on every gap; the model on the carrier.
pub fn whitney_extend(f: &SetFunction) -> Result<PiecewiseEval> {
    f.assemble(|k| {
        let (a, b) = &f.carrier.gaps[k];
        let ja = f.jet(a).ok_or_else(|| Error::MissingJet(format_rational(a)))?;
        let jb = f.jet(b).ok_or_else(|| Error::MissingJet(format_rational(b)))?;
        Ok(alloc::vec![Piece { lo: a.clone(), hi: b.clone(), kind: PieceKind::Blend { left: ja.taylor(), right: jb.taylor() } }])
    })
}

/// One-sided stencil weights `w_k` on the nodes `sign·k`, `k < nodes`: `Σ w_k p(sign·k) = p^{(d)}(0)`
/// for every polynomial `p` of degree `< nodes`.
#[allow(clippy::needless_range_loop)]
pub fn stencil_weights(d: usize, nodes: usize, sign: i64) -> Vec<Rational> {
    assert!(d < nodes);
    // Augmented Vandermonde system, solved exactly.
    let mut m: Vec<Vec<Rational>> = (0..nodes)
        .map(|j| {
            let mut row: Vec<Rational> = (0..nodes).map(|k| int(sign * k as i64).pow(j as i32)).collect();
            let mut fact = Rational::one();
            for t in 1..=j {
                fact *= int(t as i64);
            }
            row.push(if j == d { fact } else { Rational::zero() });
            row
        })
        .collect();
    for col in 0..nodes {
        let piv = (col..nodes).find(|&r| !m[r][col].is_zero()).expect("Vandermonde is invertible");
        m.swap(col, piv);
        let p = m[col][col].clone();
        for c in col..=nodes {
            m[col][c] = &m[col][c] / &p;
        }
        for r in 0..nodes {
            if r != col && !m[r][col].is_zero() {
                let k = m[r][col].clone();
                for c in col..=nodes {
                    let v = &k * &m[col][c];
                    m[r][c] -= v;
                }
            }
        }
    }
    m.into_iter().map(|row| row[nodes].clone()).collect()
}

/// Result of [`jet_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct JetProbe {
    pub checked: u64,
    pub max_err: f64,
    /// `(point, order, error)` above tolerance.
    pub failures: Vec<(Rational, usize, f64)>,
}

impl JetProbe {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One-sided finite-difference derivatives of `ext` at every gap endpoint, from inside
/// the gap, compared with the jets. Probe step `h = 10^{-4} min(1, b - a)`, five nodes.
pub fn jet_probe(ext: &PiecewiseEval, f: &SetFunction, tol: f64) -> JetProbe {
    let mut rep = JetProbe { checked: 0, max_err: 0.0, failures: Vec::new() };
    let nodes = (f.order + 3).max(5);
    for (a, b) in &f.carrier.gaps {
        let len = b - a;
        let h = if len < Rational::one() { len } else { Rational::one() } / int(10_000);
        for (x, sign) in [(a, 1i64), (b, -1i64)] {
            let Some(jet) = f.jet(x) else {
                rep.failures.push((x.clone(), 0, f64::INFINITY));
                continue;
            };
            let pts: Vec<Rational> = (0..nodes).map(|k| x + &h * int(sign * k as i64)).collect();
            let exact: Option<Vec<Rational>> = pts.iter().map(|p| ext.eval_exact(p)).collect();
            for d in 0..=f.order {
                let w = stencil_weights(d, nodes, sign);
                let err = match &exact {
                    Some(vals) => {
                        let mut acc = Rational::zero();
                        for (wk, v) in w.iter().zip(vals) {
                            acc += wk * v;
                        }
                        let est = acc / h.pow(d as i32);
                        rational_to_f64(&(est - &jet.derivs[d]).abs())
                    }
                    None => {
                        let mut acc = Ball::ZERO;
                        for (wk, p) in w.iter().zip(&pts) {
                            acc = acc + Ball::from_rational(wk) * ext.eval_rational(p);
                        }
                        let est = acc / Ball::from_rational(&h).powi(d as u32);
                        (est - Ball::from_rational(&jet.derivs[d])).mag()
                    }
                };
                rep.checked += 1;
                if err > rep.max_err {
                    rep.max_err = err;
                }
                if err > tol || !err.is_finite() {
                    rep.failures.push((x.clone(), d, err));
                }
            }
        }
    }
    rep
}
