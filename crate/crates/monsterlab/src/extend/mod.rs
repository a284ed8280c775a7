//! Extensions of functions given on closed sets.
//!
//! A [`SetFunction`] is a carrier [`GapSet`](crate::perfectsets::GapSet) with
//! jets at sample points and an exact polynomial model on each nondegenerate
//! component. Extensions are returned as a [`PiecewiseEval`]: exact polynomials
//! on carrier components and gaps, smooth blends for Whitney gaps. Outside the
//! hull every extension continues with the Taylor polynomial of the endpoint jet.

mod c1;
mod ex111;
mod jarnik;
mod piecewise;
mod setfn;
mod twisted;
mod whitney;

pub use c1::{c1_criterion, staircase, C1Report};
pub use ex111::{ex111_build, ex111_one_check, ex111_set_function, Ex111};
pub use jarnik::{fdiff_schedule, jarnik_extend, Adjustor, FdiffReport, FdiffRow, JarnikExtension};
pub use piecewise::{Piece, PieceKind, PiecewiseEval, OUTSIDE_HULL};
pub use setfn::{hat_f, hermite, linear_interpolate, CarrierPiece, SetFunction};
pub use twisted::{envelope, twisted_extend, TwistGap, TwistSettings, TwistSource, TwistWindow, TwistedExtension};
pub use whitney::{
    jet_probe, psi, psi_exact, q_fn, stencil_weights, whitney_check, whitney_extend, JetProbe, WhitneyReport, WhitneyRow,
};

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::evalcore::{RatPoly, Rational};

/// Derivative values of orders `0..=n` at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub point: Rational,
    pub derivs: Vec<Rational>,
}

impl Jet {
    pub fn new(point: Rational, derivs: Vec<Rational>) -> Jet {
        Jet { point, derivs }
    }

    pub fn order(&self) -> usize {
        self.derivs.len().saturating_sub(1)
    }

    pub fn value(&self) -> &Rational {
        &self.derivs[0]
    }

    /// Jet of the `i`-th derivative (orders `i..=n`).
    pub fn derived(&self, i: usize) -> Jet {
        Jet { point: self.point.clone(), derivs: self.derivs[i.min(self.derivs.len())..].to_vec() }
    }

    /// Taylor polynomial as a polynomial in `x`.
    pub fn taylor(&self) -> RatPoly {
        let mut local = Vec::with_capacity(self.derivs.len());
        let mut fact = Rational::one();
        for (i, d) in self.derivs.iter().enumerate() {
            if i > 0 {
                fact *= Rational::from_integer(i.into());
            }
            local.push(d / &fact);
        }
        RatPoly::new(local).shift(&-self.point.clone())
    }
}

/// `T^n_a f(x)`, evaluated exactly.
pub fn taylor_poly(jet: &Jet, x: &Rational) -> Rational {
    let h = x - &jet.point;
    let mut acc = Rational::zero();
    let mut term = Rational::one();
    for (i, d) in jet.derivs.iter().enumerate() {
        if i > 0 {
            term = term * &h / Rational::from_integer(i.into());
        }
        acc += d * &term;
    }
    acc
}
