//! JSON inputs: sampled functions for `restrict`, set functions for `extend`.
//!
//! Rationals are strings (`"p/q"`, integers or decimals) or JSON numbers. Every problem
//! found is reported with its path, e.g. `$.jets[1].derivs[0]`.

use anyhow::{bail, Result};
use monsterlab::evalcore::{parse_rational, RatPoly};
use monsterlab::extend::{CarrierPiece, Jet, SetFunction};
use monsterlab::perfectsets::{GapSet, Generator};
use monsterlab::restrict::{Interpolation, Sample, SampledFunction};
use monsterlab::Rational;
use serde_json::{json, Value};

use crate::render;

struct Checker {
    errors: Vec<String>,
}

impl Checker {
    fn err(&mut self, path: &str, msg: impl std::fmt::Display) {
        self.errors.push(format!("{path}: {msg}"));
    }

    fn field<'v>(&mut self, v: &'v Value, path: &str, key: &str, required: bool) -> Option<&'v Value> {
        let Some(obj) = v.as_object() else {
            self.err(path, "expected an object");
            return None;
        };
        let f = obj.get(key);
        if f.is_none() && required {
            self.err(&format!("{path}.{key}"), "missing");
        }
        f
    }

    fn array<'v>(&mut self, v: &'v Value, path: &str) -> Option<&'v Vec<Value>> {
        let a = v.as_array();
        if a.is_none() {
            self.err(path, "expected an array");
        }
        a
    }

    fn rational(&mut self, v: &Value, path: &str) -> Option<Rational> {
        let s = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => {
                self.err(path, "expected a rational (string \"p/q\" or number)");
                return None;
            }
        };
        match parse_rational(&s) {
            Ok(q) => Some(q),
            Err(e) => {
                self.err(path, e);
                None
            }
        }
    }

    fn rationals(&mut self, v: &Value, path: &str) -> Option<Vec<Rational>> {
        let a = self.array(v, path)?;
        let out: Vec<Option<Rational>> = a.iter().enumerate().map(|(i, x)| self.rational(x, &format!("{path}[{i}]"))).collect();
        out.into_iter().collect()
    }

    fn pair(&mut self, v: &Value, path: &str) -> Option<(Rational, Rational)> {
        let q = self.rationals(v, path)?;
        if q.len() != 2 {
            self.err(path, "expected two entries");
            return None;
        }
        let mut it = q.into_iter();
        Some((it.next()?, it.next()?))
    }

    fn gapset(&mut self, v: &Value, path: &str) -> Option<GapSet> {
        let hull = self.field(v, path, "hull", true).and_then(|h| self.pair(h, &format!("{path}.hull")));
        let gaps = match self.field(v, path, "gaps", false) {
            Some(g) => {
                let gp = format!("{path}.gaps");
                let a = self.array(g, &gp)?;
                let out: Vec<Option<(Rational, Rational)>> =
                    a.iter().enumerate().map(|(i, x)| self.pair(x, &format!("{gp}[{i}]"))).collect();
                out.into_iter().collect::<Option<Vec<_>>>()
            }
            None => Some(Vec::new()),
        };
        let generator = match self.field(v, path, "generator", false) {
            Some(Value::String(s)) => match Generator::parse(s) {
                Ok(g) => Some(g),
                Err(e) => {
                    self.err(&format!("{path}.generator"), e);
                    None
                }
            },
            Some(_) => {
                self.err(&format!("{path}.generator"), "expected a string");
                None
            }
            None => Some(Generator::Explicit),
        };
        let ((lo, hi), gaps, generator) = (hull?, gaps?, generator?);
        match GapSet::new(lo, hi, gaps, generator) {
            Ok(g) => Some(g),
            Err(e) => {
                self.err(path, e);
                None
            }
        }
    }

    fn finish<T>(self, v: Option<T>) -> Result<T> {
        match (self.errors.is_empty(), v) {
            (true, Some(v)) => Ok(v),
            _ => bail!("schema violations:\n  {}", self.errors.join("\n  ")),
        }
    }
}

/// `{"domain"?: GapSet, "samples": [{"x", "value", "radius"?}]}`. Without a domain the
/// hull of the samples is used.
pub fn sampled_function(v: &Value) -> Result<SampledFunction> {
    let mut c = Checker { errors: Vec::new() };
    let samples = c.field(v, "$", "samples", true).and_then(|s| c.array(s, "$.samples")).map(|arr| {
        arr.iter()
            .enumerate()
            .map(|(i, s)| {
                let p = format!("$.samples[{i}]");
                let x = c.field(s, &p, "x", true).and_then(|x| c.rational(x, &format!("{p}.x")));
                let value = c.field(s, &p, "value", true).and_then(|x| c.rational(x, &format!("{p}.value")));
                let radius = match c.field(s, &p, "radius", false) {
                    None => Some(0.0),
                    Some(r) => match r.as_f64() {
                        Some(r) if r >= 0.0 && r.is_finite() => Some(r),
                        _ => {
                            c.err(&format!("{p}.radius"), "expected a finite number >= 0");
                            None
                        }
                    },
                };
                Some(Sample { x: x?, value: value?, radius: radius? })
            })
            .collect::<Vec<_>>()
    });
    let samples: Option<Vec<Sample>> = samples.and_then(|s| s.into_iter().collect());
    if let Some(s) = &samples {
        if s.len() < 2 {
            c.err("$.samples", "need at least two samples");
        }
        for (i, w) in s.windows(2).enumerate() {
            if w[0].x >= w[1].x {
                c.err(&format!("$.samples[{}].x", i + 1), "abscissae must be strictly increasing");
            }
        }
    }
    let domain = match v.get("domain") {
        Some(d) => c.gapset(d, "$.domain"),
        None => samples.as_ref().filter(|s| s.len() >= 2).and_then(|s| GapSet::interval(s[0].x.clone(), s[s.len() - 1].x.clone()).ok()),
    };
    let built = match (domain, samples) {
        (Some(d), Some(s)) if c.errors.is_empty() => match SampledFunction::new(d, s, Interpolation::PiecewiseLinear) {
            Ok(f) => Some(f),
            Err(e) => {
                c.err("$", e);
                None
            }
        },
        _ => None,
    };
    c.finish(built)
}

/// `{"carrier": GapSet, "jets": [{"point", "derivs"}], "model"?: [{"interval", "coeffs"}]}`.
pub fn set_function(v: &Value) -> Result<SetFunction> {
    let mut c = Checker { errors: Vec::new() };
    let carrier = c.field(v, "$", "carrier", true).and_then(|g| c.gapset(g, "$.carrier"));
    let jets = c.field(v, "$", "jets", true).and_then(|j| c.array(j, "$.jets")).map(|arr| {
        arr.iter()
            .enumerate()
            .map(|(i, j)| {
                let p = format!("$.jets[{i}]");
                let point = c.field(j, &p, "point", true).and_then(|x| c.rational(x, &format!("{p}.point")));
                let derivs = c.field(j, &p, "derivs", true).and_then(|d| c.rationals(d, &format!("{p}.derivs")));
                if derivs.as_ref().is_some_and(Vec::is_empty) {
                    c.err(&format!("{p}.derivs"), "needs at least the value");
                }
                Some(Jet::new(point?, derivs?))
            })
            .collect::<Vec<_>>()
    });
    let jets: Option<Vec<Jet>> = jets.and_then(|j| j.into_iter().collect());
    let model = match v.get("model") {
        None => Some(None),
        Some(m) => c.array(m, "$.model").map(|arr| {
            arr.iter()
                .enumerate()
                .map(|(i, piece)| {
                    let p = format!("$.model[{i}]");
                    let iv = c.field(piece, &p, "interval", true).and_then(|x| c.pair(x, &format!("{p}.interval")));
                    let coeffs = c.field(piece, &p, "coeffs", true).and_then(|x| c.rationals(x, &format!("{p}.coeffs")));
                    let (lo, hi) = iv?;
                    Some(CarrierPiece { lo, hi, poly: RatPoly::new(coeffs?) })
                })
                .collect::<Option<Vec<_>>>()
        }),
    };
    let built = match (carrier, jets, model) {
        (Some(carrier), Some(jets), Some(model)) if c.errors.is_empty() => {
            let r = match model {
                None => SetFunction::new(carrier, jets),
                Some(m) => SetFunction::with_model(carrier, jets, m),
            };
            match r {
                Ok(f) => Some(f),
                Err(e) => {
                    c.err("$", e);
                    None
                }
            }
        }
        _ => None,
    };
    c.finish(built)
}

pub fn set_function_json(f: &SetFunction) -> Value {
    json!({
        "carrier": render::gapset(&f.carrier),
        "jets": f.jets.iter().map(|j| json!({"point": render::rat(&j.point), "derivs": render::rats(&j.derivs)})).collect::<Vec<_>>(),
        "model": f.model.iter().map(|p| json!({"interval": [render::rat(&p.lo), render::rat(&p.hi)], "coeffs": render::poly(&p.poly)})).collect::<Vec<_>>(),
    })
}
