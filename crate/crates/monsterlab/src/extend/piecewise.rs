use alloc::vec::Vec;

use super::whitney::{psi, psi_exact};
use crate::evalcore::{f64_to_rational, Ball, RatPoly, Rational};
use crate::{Error, Result};

/// How every extension is continued outside the hull of its carrier.
pub const OUTSIDE_HULL: &str = "endpoint taylor polynomial";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// Exact polynomial on a gap or a middle third.
    Poly(RatPoly),
    /// Exact polynomial model of the function on a carrier component.
    Carrier(RatPoly),
    /// `(1 - β) left + β right` with `β = ψ((x - lo) / (hi - lo))`.
    Blend { left: RatPoly, right: RatPoly },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub kind: PieceKind,
}

impl Piece {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            PieceKind::Poly(_) => "poly",
            PieceKind::Carrier(_) => "carrier",
            PieceKind::Blend { .. } => "blend",
        }
    }

    fn local(&self, x: &Rational) -> Rational {
        (x - &self.lo) / (&self.hi - &self.lo)
    }

    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        match &self.kind {
            PieceKind::Poly(p) | PieceKind::Carrier(p) => Some(p.eval(x)),
            PieceKind::Blend { left, right } => {
                let beta = psi_exact(&self.local(x))?;
                let l = left.eval(x);
                let r = right.eval(x);
                Some(&l + beta * (r - &l))
            }
        }
    }

    pub fn eval_ball(&self, x: &Rational) -> Ball {
        if let Some(v) = self.eval_exact(x) {
            return Ball::from_rational(&v);
        }
        let PieceKind::Blend { left, right } = &self.kind else { unreachable!() };
        let beta = psi(Ball::from_rational(&self.local(x)));
        let l = Ball::from_rational(&left.eval(x));
        let r = Ball::from_rational(&right.eval(x));
        l + beta * (r - l)
    }
}

/// Evaluator of an extension: contiguous pieces covering the hull plus Taylor tails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseEval {
    pub lo: Rational,
    pub hi: Rational,
    pub pieces: Vec<Piece>,
    pub left_tail: RatPoly,
    pub right_tail: RatPoly,
}

impl PiecewiseEval {
    /// Validating constructor: pieces must be nonempty, sorted and contiguous.
    pub fn new(lo: Rational, hi: Rational, pieces: Vec<Piece>, left_tail: RatPoly, right_tail: RatPoly) -> Result<PiecewiseEval> {
        if pieces.is_empty() {
            if lo != hi {
                return Err(Error::Invalid("no pieces over a nondegenerate hull".into()));
            }
        } else {
            if pieces[0].lo != lo || pieces[pieces.len() - 1].hi != hi {
                return Err(Error::Invalid("pieces do not span the hull".into()));
            }
            if pieces.iter().any(|p| p.lo >= p.hi) {
                return Err(Error::Invalid("empty piece".into()));
            }
            if pieces.windows(2).any(|w| w[0].hi != w[1].lo) {
                return Err(Error::Invalid("pieces not contiguous".into()));
            }
        }
        Ok(PiecewiseEval { lo, hi, pieces, left_tail, right_tail })
    }

    /// Index of the piece holding `x`; at a shared endpoint the left piece.
    pub fn piece_at(&self, x: &Rational) -> Option<usize> {
        if x < &self.lo || x > &self.hi || self.pieces.is_empty() {
            return None;
        }
        let i = self.pieces.partition_point(|p| &p.hi < x);
        Some(i.min(self.pieces.len() - 1))
    }

    /// Exact value, or `None` inside the non-flat part of a blend.
    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        if x < &self.lo {
            return Some(self.left_tail.eval(x));
        }
        if x > &self.hi {
            return Some(self.right_tail.eval(x));
        }
        match self.piece_at(x) {
            Some(i) => self.pieces[i].eval_exact(x),
            None => Some(self.left_tail.eval(x)),
        }
    }

    pub fn eval_rational(&self, x: &Rational) -> Ball {
        if let Some(v) = self.eval_exact(x) {
            return Ball::from_rational(&v);
        }
        let i = self.piece_at(x).expect("inside hull");
        self.pieces[i].eval_ball(x)
    }

    pub fn eval(&self, x: f64) -> Ball {
        if !x.is_finite() {
            return Ball::new(f64::NAN, f64::INFINITY);
        }
        self.eval_rational(&f64_to_rational(x))
    }

    /// Largest polynomial degree over the pieces.
    pub fn max_degree(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| match &p.kind {
                PieceKind::Poly(q) | PieceKind::Carrier(q) => q.degree(),
                PieceKind::Blend { left, right } => left.degree().max(right.degree()),
            })
            .max()
            .unwrap_or(0)
    }

    /// Pieces meeting the open interval `(a, b)`.
    pub fn pieces_in(&self, a: &Rational, b: &Rational) -> Vec<&Piece> {
        self.pieces.iter().filter(|p| &p.hi > a && &p.lo < b).collect()
    }
}

/// Line through `(x0, v0)` with slope `s`.
pub(crate) fn line(x0: &Rational, v0: &Rational, s: &Rational) -> RatPoly {
    RatPoly::new(alloc::vec![v0 - s * x0, s.clone()])
}
