use alloc::string::String;
use alloc::vec::Vec;

use crate::evalcore::{f64_to_rational, Ball, Rational};
use crate::perfectsets::GapSet;
use crate::{Error, Result};

/// How values between samples are read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interpolation {
    PiecewiseLinear,
    /// Samples of a named closed form; the piecewise-linear model is still used between samples.
    Formula(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub x: Rational,
    /// Exact value of the model at `x` (the ball center when sampled from a ball evaluator).
    pub value: Rational,
    /// Evaluation radius of the source; `0` for exact data.
    pub radius: f64,
}

impl Sample {
    pub fn ball(&self) -> Ball {
        Ball::from_rational(&self.value).widen(self.radius)
    }
}

/// Finitely many samples of a function on a closed set.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    pub domain: GapSet,
    pub samples: Vec<Sample>,
    pub interp: Interpolation,
}

impl SampledFunction {
    /// Sample abscissae must be strictly increasing and lie in `domain`.
    pub fn new(domain: GapSet, samples: Vec<Sample>, interp: Interpolation) -> Result<SampledFunction> {
        for w in samples.windows(2) {
            if w[0].x >= w[1].x {
                return Err(Error::Invalid("sample abscissae not strictly increasing".into()));
            }
        }
        if let Some(s) = samples.iter().find(|s| !domain.contains(&s.x)) {
            return Err(Error::Invalid(alloc::format!("sample {} outside the domain", s.x)));
        }
        Ok(SampledFunction { domain, samples, interp })
    }

    /// Exact piecewise-linear data on the hull of the given points.
    pub fn piecewise_linear(points: Vec<(Rational, Rational)>) -> Result<SampledFunction> {
        if points.is_empty() {
            return Err(Error::TooFewSamples);
        }
        let lo = points[0].0.clone();
        let hi = points[points.len() - 1].0.clone();
        let domain = GapSet::interval(lo, hi)?;
        let samples = points.into_iter().map(|(x, value)| Sample { x, value, radius: 0.0 }).collect();
        SampledFunction::new(domain, samples, Interpolation::PiecewiseLinear)
    }

    /// Exact values from a rational closed form.
    pub fn from_exact(
        domain: GapSet,
        xs: Vec<Rational>,
        name: &str,
        f: impl Fn(&Rational) -> Rational,
    ) -> Result<SampledFunction> {
        let samples = xs.into_iter().map(|x| Sample { value: f(&x), x, radius: 0.0 }).collect();
        SampledFunction::new(domain, samples, Interpolation::Formula(name.into()))
    }

    /// Values from a ball evaluator; centers become the model, radii are kept.
    pub fn from_ball_fn(domain: GapSet, xs: Vec<Rational>, name: &str, f: impl Fn(&Rational) -> Ball) -> Result<SampledFunction> {
        let mut samples = Vec::with_capacity(xs.len());
        for x in xs {
            let b = f(&x);
            if !b.is_finite() {
                return Err(Error::Invalid(alloc::format!("non-finite value at {x}")));
            }
            samples.push(Sample { value: f64_to_rational(b.center), x, radius: b.radius });
        }
        SampledFunction::new(domain, samples, Interpolation::Formula(name.into()))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn xs(&self) -> impl Iterator<Item = &Rational> {
        self.samples.iter().map(|s| &s.x)
    }

    /// Piecewise-linear model value at `x`, which must lie within the sample range.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let s = &self.samples;
        if s.is_empty() || x < &s[0].x || x > &s[s.len() - 1].x {
            return Err(Error::OutsideHull);
        }
        let i = s.partition_point(|p| &p.x < x);
        if s[i].x == *x {
            return Ok(s[i].value.clone());
        }
        Ok(lerp(&s[i - 1].x, &s[i - 1].value, &s[i].x, &s[i].value, x))
    }

    /// Breakpoints of the model on `[a, b]`: `a`, the samples strictly inside, `b`.
    pub fn model(&self, a: &Rational, b: &Rational) -> Result<Vec<(Rational, Rational)>> {
        if a >= b {
            return Err(Error::EmptyInterval);
        }
        let mut out = Vec::new();
        out.push((a.clone(), self.eval(a)?));
        out.extend(self.samples.iter().filter(|s| &s.x > a && &s.x < b).map(|s| (s.x.clone(), s.value.clone())));
        out.push((b.clone(), self.eval(b)?));
        Ok(out)
    }

    /// Largest evaluation radius among the samples.
    pub fn max_radius(&self) -> f64 {
        self.samples.iter().map(|s| s.radius).fold(0.0, f64::max)
    }
}

pub(crate) fn lerp(x0: &Rational, v0: &Rational, x1: &Rational, v1: &Rational, x: &Rational) -> Rational {
    v0 + (v1 - v0) * (x - x0) / (x1 - x0)
}

/// Direction of a sequence of model values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    /// Some consecutive pair is equal; the index of the first such pair.
    Flat(usize),
    Neither,
}

pub fn monotonicity(values: &[&Rational]) -> Monotonicity {
    if let Some(i) = values.windows(2).position(|w| w[0] == w[1]) {
        return Monotonicity::Flat(i);
    }
    if values.windows(2).all(|w| w[0] < w[1]) {
        Monotonicity::Increasing
    } else if values.windows(2).all(|w| w[0] > w[1]) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::Neither
    }
}
