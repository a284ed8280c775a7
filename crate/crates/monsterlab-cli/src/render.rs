//! Number formatting and output writers.

use monsterlab::evalcore::{f64_to_rational, format_rational, RatPoly};
use monsterlab::extend::{PieceKind, PiecewiseEval, OUTSIDE_HULL};
use monsterlab::perfectsets::{GapSet, SweepReport};
use monsterlab::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

/// Fractional digits in CSV output unless `MONSTERLAB_PRECISION` says otherwise.
pub const DEFAULT_PRECISION: usize = 17;

/// `"p/q"`.
pub fn rat(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// An `f64` as the exact rational it denotes.
pub fn f64_rat(x: f64) -> Value {
    if x.is_finite() {
        rat(&f64_to_rational(x))
    } else {
        Value::String(x.to_string())
    }
}

pub fn rats<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(qs.into_iter().map(rat).collect())
}

pub fn poly(p: &RatPoly) -> Value {
    rats(&p.coeffs)
}

/// Fixed-point decimal with `digits` fractional digits. Rounds half away from zero,
/// or towards `+∞` when `up` is set (for radii).
pub fn decimal(q: &Rational, digits: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let n = q.numer() * &scale;
    let d = q.denom().clone();
    let (quot, rem) = n.div_mod_floor(&d);
    let rounded = if up {
        if rem.is_zero() {
            quot
        } else {
            quot + 1
        }
    } else {
        // Round half away from zero on |q|.
        let mag = n.abs();
        let (mq, mr) = mag.div_rem(&d);
        let mq = if mr * 2 >= d { mq + 1 } else { mq };
        if n.is_negative() {
            -mq
        } else {
            mq
        }
    };
    let neg = rounded.is_negative();
    let digits_str = rounded.abs().to_string();
    let padded = if digits_str.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - digits_str.len()), digits_str) } else { digits_str };
    let (ip, fp) = padded.split_at(padded.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

pub fn f64_decimal(x: f64, digits: usize, up: bool) -> String {
    if x.is_finite() {
        decimal(&f64_to_rational(x), digits, up)
    } else {
        x.to_string()
    }
}

/// One sampled row.
pub struct Row {
    pub x: Rational,
    pub value: Rational,
    pub radius: f64,
}

pub fn csv(rows: &[Row], precision: usize) -> anyhow::Result<Vec<u8>> {
    let mut out = format!("# precision: {precision} fractional digits\n").into_bytes();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["x", "value", "radius"])?;
    for r in rows {
        w.write_record([decimal(&r.x, precision, false), decimal(&r.value, precision, false), f64_decimal(r.radius, precision, true)])?;
    }
    out.extend(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?);
    Ok(out)
}

pub fn rows_json(rows: &[Row]) -> Value {
    Value::Array(rows.iter().map(|r| json!([rat(&r.x), rat(&r.value), f64_rat(r.radius)])).collect())
}

pub fn gapset(g: &GapSet) -> Value {
    json!({
        "hull": [rat(&g.lo), rat(&g.hi)],
        "gaps": g.gaps.iter().map(|(a, b)| json!([rat(a), rat(b)])).collect::<Vec<_>>(),
        "generator": g.generator.to_string(),
    })
}

pub fn sweep(rep: &SweepReport) -> Value {
    json!({
        "cases": rep.cases,
        "passed": rep.passed(),
        "failed": rep.failed,
        "witnesses": rep.witnesses,
    })
}

pub fn piecewise(p: &PiecewiseEval) -> Value {
    let pieces: Vec<Value> = p
        .pieces
        .iter()
        .map(|piece| {
            let mut o = json!({
                "interval": [rat(&piece.lo), rat(&piece.hi)],
                "kind": piece.kind_name(),
            });
            match &piece.kind {
                PieceKind::Poly(q) | PieceKind::Carrier(q) => o["coeffs"] = poly(q),
                PieceKind::Blend { left, right } => {
                    o["coeffs"] = poly(left);
                    o["right_coeffs"] = poly(right);
                }
            }
            o
        })
        .collect();
    json!({
        "hull": [rat(&p.lo), rat(&p.hi)],
        "outside_hull": OUTSIDE_HULL,
        "left_tail": poly(&p.left_tail),
        "right_tail": poly(&p.right_tail),
        "pieces": pieces,
    })
}

/// Pretty JSON with a trailing newline.
pub fn json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use monsterlab::evalcore::rat as q;

    #[test]
    fn decimals() {
        assert_eq!(decimal(&q(1, 3), 4, false), "0.3333");
        assert_eq!(decimal(&q(2, 3), 4, false), "0.6667");
        assert_eq!(decimal(&q(-2, 3), 4, false), "-0.6667");
        assert_eq!(decimal(&q(-1, 8), 2, false), "-0.13");
        assert_eq!(decimal(&q(1, 3), 2, true), "0.34");
        assert_eq!(decimal(&q(5, 1), 0, false), "5");
        assert_eq!(decimal(&q(-1, 1000), 2, false), "0.00");
        assert_eq!(decimal(&q(12345, 100), 3, false), "123.450");
    }
}
