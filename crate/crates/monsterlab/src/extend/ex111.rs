use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::piecewise::{line, Piece, PieceKind, PiecewiseEval};
use super::setfn::SetFunction;
use super::Jet;
use crate::evalcore::{int, rpow, RatPoly, Rational};
use crate::perfectsets::{cantor_ternary, GapSet, Generator, SweepReport};
use crate::{Error, Result};

/// The `C¹` function whose derivative vanishes on the Cantor set, built to a finite depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ex111 {
    pub depth: u32,
    pub set: GapSet,
    /// `f₀`: a triangle of peak `2^{-(n+1)}` on each gap of length `3^{-n}`, zero on the carrier.
    pub f0: PiecewiseEval,
    /// `f = ∫_0^x f₀`, exact at every component endpoint. On a component the mass of all
    /// deeper gaps (`6^{-depth}/16`) is spread linearly.
    pub f: PiecewiseEval,
}

/// Level `n` of a gap of length `3^{-n}`.
fn level(len: &Rational) -> i32 {
    let mut n = 0;
    let mut l = len.clone();
    while l < Rational::from_integer(1.into()) {
        l *= int(3);
        n += 1;
    }
    n
}

pub fn ex111_build(depth: u32) -> Result<Ex111> {
    if depth > 16 {
        return Err(Error::Invalid("ex111 depth must be at most 16".into()));
    }
    let mut set = cantor_ternary(depth);
    set.generator = Generator::Ex111(depth);
    let residual = rpow(&int(6), -(depth as i32)) / int(16);
    let two = int(2);
    let mut f0 = Vec::new();
    let mut f = Vec::new();
    let mut acc = Rational::zero();
    let comps = set.components();
    for (k, (c, d)) in comps.iter().enumerate() {
        let slope = &residual / (d - c);
        f0.push(Piece { lo: c.clone(), hi: d.clone(), kind: PieceKind::Carrier(RatPoly::zero()) });
        f.push(Piece { lo: c.clone(), hi: d.clone(), kind: PieceKind::Carrier(line(c, &acc, &slope)) });
        acc += &residual;
        let Some((p, q)) = set.gaps.get(k) else { break };
        let n = level(&(q - p));
        let kappa = rpow(&Rational::new(3.into(), 2.into()), n);
        let m = (p + q) / &two;
        for (lo, hi, h) in [(p, &m, line(p, &Rational::zero(), &kappa)), (&m, q, line(q, &Rational::zero(), &-kappa.clone()))] {
            let big = h.integral();
            let g = big.add(&RatPoly::new(alloc::vec![&acc - big.eval(lo)]));
            acc = g.eval(hi);
            f0.push(Piece { lo: lo.clone(), hi: hi.clone(), kind: PieceKind::Poly(h) });
            f.push(Piece { lo: lo.clone(), hi: hi.clone(), kind: PieceKind::Poly(g) });
        }
    }
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());
    let f0 = PiecewiseEval::new(zero.clone(), one.clone(), f0, RatPoly::zero(), RatPoly::zero())?;
    let f = PiecewiseEval::new(zero, one, f, RatPoly::zero(), RatPoly::new(alloc::vec![acc]))?;
    Ok(Ex111 { depth, set, f0, f })
}

/// Jets `(f, 0, 0)` of the example at every component endpoint of depth `depth`.
pub fn ex111_set_function(depth: u32) -> Result<SetFunction> {
    let ex = ex111_build(depth)?;
    let jets = ex
        .set
        .endpoints()
        .into_iter()
        .map(|x| {
            let v = ex.f.eval_exact(&x).expect("polynomial pieces");
            Jet::new(x, alloc::vec![v, Rational::zero(), Rational::zero()])
        })
        .collect();
    SetFunction::new(ex.set, jets)
}

/// `|f(b) - f(a)| / (b - a)² > (1/36)(3/2)^n` for all endpoint pairs with `|b - a| < 3^{-n}`.
///
/// Exact integer arithmetic: positions in units of `3^{-depth}`, values in units of
/// `6^{-depth}/16`. Every admissible `n ≥ 1` is checked for every pair.
pub fn ex111_one_check(depth: u32) -> SweepReport {
    let mut rep = SweepReport::default();
    if depth == 0 || depth > 12 {
        rep.cases = 1;
        rep.fail(|| format!("depth {depth} outside 1..=12"));
        return rep;
    }
    let d = depth;
    let ncomp = 1usize << d;
    let mut xs: Vec<i128> = Vec::with_capacity(2 * ncomp);
    let mut fs: Vec<i128> = Vec::with_capacity(2 * ncomp);
    let mut acc: i128 = 0;
    for k in 0..ncomp {
        let mut c: i128 = 0;
        for j in 0..d {
            if (k >> j) & 1 == 1 {
                c += 2 * 3i128.pow(j);
            }
        }
        xs.push(c);
        fs.push(acc);
        acc += 1;
        xs.push(c + 1);
        fs.push(acc);
        if k + 1 < ncomp {
            let n = d - (k + 1).trailing_zeros();
            // Gap mass (1/4) 6^{-n} in units of 6^{-d}/16.
            acc += 4 * 6i128.pow(d - n);
        }
    }
    let pow3_d = 3i128.pow(d);
    let pow2_d = 2i128.pow(d);
    for u in 0..xs.len() {
        for v in u + 1..xs.len() {
            let dx = xs[v] - xs[u];
            let df = (fs[v] - fs[u]).abs();
            let mut n = 1u32;
            while n < d && dx < 3i128.pow(d - n) {
                rep.cases += 1;
                // 36·2^n·Δf·3^d > 16·2^d·Δx²·3^n
                let lhs = 36 * 2i128.pow(n) * df * pow3_d;
                let rhs = 16 * pow2_d * dx * dx * 3i128.pow(n);
                if lhs <= rhs {
                    rep.fail(|| format!("n={n}: x=({}, {})/3^{d}", xs[u], xs[v]));
                }
                n += 1;
            }
        }
    }
    rep
}
