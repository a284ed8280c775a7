use alloc::format;
use alloc::vec::Vec;

use super::piecewise::{line, Piece, PieceKind, PiecewiseEval};
use super::Jet;
use crate::evalcore::{format_rational, int, RatPoly, Rational};
use crate::perfectsets::{hat, GapSet};
use crate::{Error, Result};

/// Exact polynomial model of `f` on `[lo, hi]` inside a carrier component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierPiece {
    pub lo: Rational,
    pub hi: Rational,
    pub poly: RatPoly,
}

/// A function on a closed set, known through jets and a polynomial model on components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    pub carrier: GapSet,
    /// Sorted by point, one jet per point.
    pub jets: Vec<Jet>,
    pub order: usize,
    /// Sorted pieces covering every nondegenerate component of the carrier.
    pub model: Vec<CarrierPiece>,
}

/// Cubic Hermite interpolant through `(x0, v0, d0)` and `(x1, v1, d1)`, in `x`.
pub fn hermite(x0: &Rational, v0: &Rational, d0: &Rational, x1: &Rational, v1: &Rational, d1: &Rational) -> RatPoly {
    let h = x1 - x0;
    let delta = (v1 - v0) / &h;
    let c2 = (int(3) * &delta - int(2) * d0 - d1) / &h;
    let c3 = (d0 + d1 - int(2) * &delta) / (&h * &h);
    RatPoly::new(alloc::vec![v0.clone(), d0.clone(), c2, c3]).shift(&-x0.clone())
}

impl SetFunction {
    /// Jets only; the model is cubic Hermite between consecutive jets of a component
    /// (linear for order 0).
    pub fn new(carrier: GapSet, jets: Vec<Jet>) -> Result<SetFunction> {
        let (jets, order) = check_jets(&carrier, jets)?;
        let mut model = Vec::new();
        for (c, d) in carrier.components() {
            if c == d {
                continue;
            }
            let inside: Vec<&Jet> = jets.iter().filter(|j| c <= j.point && j.point <= d).collect();
            for w in inside.windows(2) {
                let (a, b) = (w[0], w[1]);
                let poly = if order == 0 {
                    line(&a.point, a.value(), &((b.value() - a.value()) / (&b.point - &a.point)))
                } else {
                    hermite(&a.point, a.value(), &a.derivs[1], &b.point, b.value(), &b.derivs[1])
                };
                model.push(CarrierPiece { lo: a.point.clone(), hi: b.point.clone(), poly });
            }
        }
        Ok(SetFunction { carrier, jets, order, model })
    }

    /// Jets with an explicit model; model values (and first derivatives, for order ≥ 1)
    /// must agree with the jets they meet.
    pub fn with_model(carrier: GapSet, jets: Vec<Jet>, mut model: Vec<CarrierPiece>) -> Result<SetFunction> {
        let (jets, order) = check_jets(&carrier, jets)?;
        model.sort_by(|a, b| a.lo.cmp(&b.lo));
        for (c, d) in carrier.components() {
            if c == d {
                continue;
            }
            let mut reach = c.clone();
            for p in model.iter().filter(|p| p.lo >= c && p.hi <= d) {
                if p.lo != reach || p.lo >= p.hi {
                    return Err(Error::Invalid(format!("model does not tile component [{}, {}]", format_rational(&c), format_rational(&d))));
                }
                reach = p.hi.clone();
            }
            if reach != d {
                return Err(Error::Invalid(format!("model does not tile component [{}, {}]", format_rational(&c), format_rational(&d))));
            }
        }
        for p in &model {
            if !carrier.contains(&p.lo) || !carrier.contains(&p.hi) || carrier.gap_index(&((&p.lo + &p.hi) / int(2))).is_some() {
                return Err(Error::Invalid("model piece outside the carrier".into()));
            }
            let dp = p.poly.derivative();
            for j in jets.iter().filter(|j| p.lo <= j.point && j.point <= p.hi) {
                if p.poly.eval(&j.point) != *j.value() || (order >= 1 && dp.eval(&j.point) != j.derivs[1]) {
                    return Err(Error::MissingJet(format!("model disagrees with jet at {}", format_rational(&j.point))));
                }
            }
        }
        Ok(SetFunction { carrier, jets, order, model })
    }

    /// Restriction of a polynomial: jets of order `order` at the endpoints and at `extra`.
    pub fn from_poly(carrier: GapSet, poly: &RatPoly, order: usize, extra: &[Rational]) -> Result<SetFunction> {
        let mut pts = carrier.endpoints();
        pts.extend(extra.iter().filter(|x| carrier.contains(x)).cloned());
        pts.sort();
        pts.dedup();
        let mut derivs = alloc::vec![poly.clone()];
        for i in 0..order {
            let d = derivs[i].derivative();
            derivs.push(d);
        }
        let jets = pts.iter().map(|x| Jet::new(x.clone(), derivs.iter().map(|d| d.eval(x)).collect())).collect();
        let model = carrier
            .components()
            .into_iter()
            .filter(|(c, d)| c < d)
            .map(|(lo, hi)| CarrierPiece { lo, hi, poly: poly.clone() })
            .collect();
        SetFunction::with_model(carrier, jets, model)
    }

    /// Jets computed by `f` at the endpoints and at `extra`; Hermite model.
    pub fn from_jet_fn(carrier: GapSet, extra: &[Rational], f: impl Fn(&Rational) -> Vec<Rational>) -> Result<SetFunction> {
        let mut pts = carrier.endpoints();
        pts.extend(extra.iter().filter(|x| carrier.contains(x)).cloned());
        pts.sort();
        pts.dedup();
        let jets = pts.iter().map(|x| Jet::new(x.clone(), f(x))).collect();
        SetFunction::new(carrier, jets)
    }

    pub fn jet(&self, x: &Rational) -> Option<&Jet> {
        self.jets.binary_search_by(|j| j.point.cmp(x)).ok().map(|i| &self.jets[i])
    }

    fn jet_or_missing(&self, x: &Rational) -> Result<&Jet> {
        self.jet(x).ok_or_else(|| Error::MissingJet(format_rational(x)))
    }

    /// Value on the carrier (model or jet).
    pub fn value(&self, x: &Rational) -> Option<Rational> {
        if let Some(j) = self.jet(x) {
            return Some(j.value().clone());
        }
        if !self.carrier.contains(x) {
            return None;
        }
        self.model.iter().find(|p| &p.lo <= x && x <= &p.hi).map(|p| p.poly.eval(x))
    }

    /// Model piece `[c, x]` ending at `x`.
    pub fn piece_ending_at(&self, x: &Rational) -> Option<&CarrierPiece> {
        self.model.iter().find(|p| &p.hi == x)
    }

    /// Model piece `[x, d]` starting at `x`.
    pub fn piece_starting_at(&self, x: &Rational) -> Option<&CarrierPiece> {
        self.model.iter().find(|p| &p.lo == x)
    }

    /// Secant slope across gap `k`.
    pub fn gap_slope(&self, k: usize) -> Result<Rational> {
        let (a, b) = &self.carrier.gaps[k];
        let fa = self.jet_or_missing(a)?.value();
        let fb = self.jet_or_missing(b)?.value();
        Ok((fb - fa) / (b - a))
    }

    pub(crate) fn tails(&self) -> Result<(RatPoly, RatPoly)> {
        Ok((self.jet_or_missing(&self.carrier.lo)?.taylor(), self.jet_or_missing(&self.carrier.hi)?.taylor()))
    }

    /// Pieces over the carrier (model) interleaved with `gap_pieces(k)` over gap `k`.
    pub(crate) fn assemble(&self, mut gap_pieces: impl FnMut(usize) -> Result<Vec<Piece>>) -> Result<PiecewiseEval> {
        let mut pieces = Vec::new();
        let mut model = self.model.iter().peekable();
        for k in 0..=self.carrier.gaps.len() {
            let end = self.carrier.gaps.get(k).map(|g| g.0.clone()).unwrap_or_else(|| self.carrier.hi.clone());
            while let Some(p) = model.next_if(|p| p.hi <= end) {
                pieces.push(Piece { lo: p.lo.clone(), hi: p.hi.clone(), kind: PieceKind::Carrier(p.poly.clone()) });
            }
            if k < self.carrier.gaps.len() {
                pieces.extend(gap_pieces(k)?);
            }
        }
        let (lt, rt) = self.tails()?;
        PiecewiseEval::new(self.carrier.lo.clone(), self.carrier.hi.clone(), pieces, lt, rt)
    }
}

fn check_jets(carrier: &GapSet, mut jets: Vec<Jet>) -> Result<(Vec<Jet>, usize)> {
    if jets.is_empty() {
        return Err(Error::MissingJet("no jets".into()));
    }
    jets.sort_by(|a, b| a.point.cmp(&b.point));
    if jets.windows(2).any(|w| w[0].point == w[1].point) {
        return Err(Error::Invalid("two jets at one point".into()));
    }
    let order = jets[0].order();
    if jets.iter().any(|j| j.derivs.is_empty() || j.order() != order) {
        return Err(Error::MissingJet("jets of mixed order".into()));
    }
    if let Some(j) = jets.iter().find(|j| !carrier.contains(&j.point)) {
        return Err(Error::Invalid(format!("jet at {} outside the carrier", format_rational(&j.point))));
    }
    for e in carrier.endpoints() {
        if jets.binary_search_by(|j| j.point.cmp(&e)).is_err() {
            return Err(Error::MissingJet(format_rational(&e)));
        }
    }
    Ok((jets, order))
}

/// `f̄`: the model on the carrier, linear across gaps.
pub fn linear_interpolate(f: &SetFunction) -> Result<PiecewiseEval> {
    f.assemble(|k| {
        let (a, b) = &f.carrier.gaps[k];
        let s = f.gap_slope(k)?;
        let fa = f.jet_or_missing(a)?.value().clone();
        Ok(alloc::vec![Piece { lo: a.clone(), hi: b.clone(), kind: PieceKind::Poly(line(a, &fa, &s)) }])
    })
}

/// `f̂ = f̄` restricted to the carrier plus the closed middle thirds of its gaps.
///
/// Jets are truncated to order 1; on a middle third the derivative is the gap slope.
pub fn hat_f(f: &SetFunction) -> Result<SetFunction> {
    if f.order < 1 {
        return Err(Error::MissingJet("hat_f needs first derivatives".into()));
    }
    let mut jets: Vec<Jet> = f.jets.iter().map(|j| Jet::new(j.point.clone(), j.derivs[..2].to_vec())).collect();
    let mut model = f.model.clone();
    for k in 0..f.carrier.gaps.len() {
        let (a, b) = &f.carrier.gaps[k];
        let s = f.gap_slope(k)?;
        let fa = f.jet_or_missing(a)?.value().clone();
        let t = (b - a) / int(3);
        let p = a + &t;
        let q = b - &t;
        let lin = line(a, &fa, &s);
        jets.push(Jet::new(p.clone(), alloc::vec![lin.eval(&p), s.clone()]));
        jets.push(Jet::new(q.clone(), alloc::vec![lin.eval(&q), s.clone()]));
        model.push(CarrierPiece { lo: p, hi: q, poly: lin });
    }
    jets.sort_by(|a, b| a.point.cmp(&b.point));
    model.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(SetFunction { carrier: hat(&f.carrier), jets, order: 1, model })
}
