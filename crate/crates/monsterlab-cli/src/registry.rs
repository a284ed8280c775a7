//! Named functions for `sample` and `restrict`, and named set-function data for `extend`.

use anyhow::{anyhow, bail, Result};
use monsterlab::evalcore::{f64_to_rational, int, rational_to_f64, RatPoly};
use monsterlab::extend::{ex111_build, ex111_set_function, staircase, SetFunction};
use monsterlab::monsters::*;
use monsterlab::perfectsets::cantor_ternary;
use monsterlab::{Ball, Rational};

use crate::config::Params;

/// Sampleable functions: id and a one-line description.
pub const FUNCTIONS: &[(&str, &str)] = &[
    ("volterra_h", "x^2 sin(1/x)"),
    ("volterra_h_prime", "2x sin(1/x) - cos(1/x)"),
    ("psi", "x + 2x^2 sin(1/x)"),
    ("phi", "x^4 (2 + sin(1/x))"),
    ("eta", "e^{-3x} x^2 sin(1/x)"),
    ("eta_prime", "derivative of eta"),
    ("volterra_cantor", "Volterra-type function on the Cantor set of --depth levels"),
    ("takagi", "exact Takagi-type partial sum to --depth terms"),
    ("weierstrass", "Weierstrass sum with --depth terms"),
    ("pompeiu_g", "Pompeiu series g"),
    ("pompeiu_h", "inverse h of the Pompeiu series"),
    ("monster", "differentiable monster h(x - t) - h(x); param t (default 1/4)"),
    ("andy_gamma", "smooth step gamma"),
    ("andy_phi", "phi = m h'(x - b) stand-in"),
    ("andy_psi", "gamma composed with phi"),
    ("smooth_step", "the fixed smooth step used by the Whitney extension"),
    ("ex111", "the C^1 example f with f' = 0 on the Cantor set, --depth levels"),
    ("ex111_f0", "its derivative f0"),
];

/// Set-function data for `extend`: id and description.
pub const SET_FUNCTIONS: &[(&str, &str)] = &[
    ("x2", "jets of x^2 on the Cantor set of --depth levels; param order (default 1)"),
    ("x3", "jets of x^3 on the Cantor set; param order"),
    ("sin", "jets of sin on the Cantor set; param order"),
    ("poly", "jets of the polynomial with param coeffs (comma separated, lowest first)"),
    ("ex111", "jets (f, 0, 0) of the ex111 function at --depth"),
    ("staircase", "staircase data with --depth segments; params lambda, ratio"),
];

pub fn is_function(id: &str) -> bool {
    FUNCTIONS.iter().any(|(k, _)| *k == id)
}

pub fn is_set_function(id: &str) -> bool {
    SET_FUNCTIONS.iter().any(|(k, _)| *k == id)
}

type BallFn = Box<dyn Fn(f64) -> monsterlab::Result<Ball>>;
type ExactFn = Box<dyn Fn(&Rational) -> (Rational, f64)>;

/// How a function is evaluated.
pub enum Evaluator {
    /// Ball evaluator at an `f64` point.
    Ball(BallFn),
    /// Exact value and error radius at a rational point.
    Exact(ExactFn),
}

pub fn evaluator(id: &str, depth: Option<u32>, params: &Params) -> Result<Evaluator> {
    let ball = |f: fn(f64) -> Ball| Evaluator::Ball(Box::new(move |x| Ok(f(x))));
    Ok(match id {
        "volterra_h" => ball(volterra_h),
        "volterra_h_prime" => ball(volterra_h_prime),
        "psi" => ball(psi),
        "phi" => ball(phi),
        "eta" => ball(eta),
        "eta_prime" => ball(eta_prime),
        "volterra_cantor" => {
            let v = VolterraOnSet::new(cantor_ternary(depth.unwrap_or(4)));
            Evaluator::Ball(Box::new(move |x| v.eval(x)))
        }
        "takagi" => {
            let spec = TakagiSpec { depth: depth.unwrap_or(8) };
            Evaluator::Exact(Box::new(move |x| {
                let v = takagi(spec, x);
                (v.partial, rational_to_f64(&v.tail))
            }))
        }
        "weierstrass" => {
            let terms = depth.unwrap_or(24);
            Evaluator::Ball(Box::new(move |x| Ok(weierstrass_w(x, terms))))
        }
        "pompeiu_g" => {
            let p = PompeiuSpec::standard();
            Evaluator::Ball(Box::new(move |x| Ok(pompeiu_g(&p, x))))
        }
        "pompeiu_h" => {
            let p = PompeiuSpec::standard();
            Evaluator::Ball(Box::new(move |x| pompeiu_h_ball(&p, Ball::exact(x))))
        }
        "monster" => {
            let p = PompeiuSpec::standard();
            let t = rational_to_f64(&params.rational("t")?.unwrap_or_else(|| Rational::new(1.into(), 4.into())));
            Evaluator::Ball(Box::new(move |x| monster_eval(&p, t, x)))
        }
        "andy_gamma" => ball(andy_gamma),
        "andy_phi" | "andy_psi" => {
            let spec = AndySpec::new(PompeiuSpec::standard()).map_err(|e| anyhow!("{e}"))?;
            if id == "andy_phi" {
                Evaluator::Ball(Box::new(move |x| andy_phi(&spec, x)))
            } else {
                Evaluator::Ball(Box::new(move |x| andy_psi(&spec, x)))
            }
        }
        "smooth_step" => Evaluator::Ball(Box::new(|x| Ok(monsterlab::extend::psi(Ball::exact(x))))),
        "ex111" | "ex111_f0" => {
            let ex = ex111_build(depth.unwrap_or(8)).map_err(|e| anyhow!("{e}"))?;
            let pw = if id == "ex111" { ex.f } else { ex.f0 };
            Evaluator::Exact(Box::new(move |x| match pw.eval_exact(x) {
                Some(v) => (v, 0.0),
                None => {
                    let b = pw.eval_rational(x);
                    (f64_to_rational(b.center), b.radius)
                }
            }))
        }
        _ => bail!("unknown function id {id:?}"),
    })
}

/// Built-in set-function data.
pub fn set_function(id: &str, depth: Option<u32>, params: &Params) -> Result<SetFunction> {
    let order = params.usize("order")?.unwrap_or(1);
    let carrier = || cantor_ternary(depth.unwrap_or(3));
    let from_poly = |p: RatPoly| SetFunction::from_poly(carrier(), &p, order, &[]).map_err(|e| anyhow!("{e}"));
    match id {
        "x2" => from_poly(RatPoly::from_ints(&[0, 0, 1])),
        "x3" => from_poly(RatPoly::from_ints(&[0, 0, 0, 1])),
        "poly" => {
            let coeffs = params.get("coeffs").ok_or_else(|| anyhow!("poly needs --param coeffs=c0,c1,..."))?;
            let cs = coeffs
                .split(',')
                .map(|c| monsterlab::evalcore::parse_rational(c).map_err(|e| anyhow!("param coeffs: {e}")))
                .collect::<Result<Vec<_>>>()?;
            from_poly(RatPoly::new(cs))
        }
        "sin" => SetFunction::from_jet_fn(carrier(), &[], |x| sin_jet(x, order)).map_err(|e| anyhow!("{e}")),
        "ex111" => ex111_set_function(depth.unwrap_or(6)).map_err(|e| anyhow!("{e}")),
        "staircase" => {
            let lambda = params.rational("lambda")?.unwrap_or_else(|| int(1));
            let ratio = params.rational("ratio")?.unwrap_or_else(|| int(1));
            staircase(depth.unwrap_or(12), &lambda, &ratio).map_err(|e| anyhow!("{e}"))
        }
        _ => bail!("unknown set function {id:?}"),
    }
}

/// `sin` and its derivatives at `x`, each rounded to the nearest `f64` and read exactly.
pub fn sin_jet(x: &Rational, order: usize) -> Vec<Rational> {
    let v = rational_to_f64(x);
    (0..=order)
        .map(|i| {
            let d = match i % 4 {
                0 => v.sin(),
                1 => v.cos(),
                2 => -v.sin(),
                _ => -v.cos(),
            };
            f64_to_rational(d)
        })
        .collect()
}
