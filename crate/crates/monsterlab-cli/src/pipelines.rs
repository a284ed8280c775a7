//! Restriction and extension pipelines, and the monster demo.

use anyhow::{anyhow, bail, Result};
use monsterlab::evalcore::{format_rational, int, rat, rpow};
use monsterlab::extend::{
    c1_criterion, fdiff_schedule, hat_f, jarnik_extend, jet_probe, linear_interpolate, twisted_extend, whitney_check,
    whitney_extend, Adjustor, SetFunction, TwistSettings, TwistSource,
};
use monsterlab::monsters::{monster_eval, monster_quotients, search_monster, signs_hold, AnchoredSide, MonsterSearch, PompeiuSpec};
use monsterlab::restrict::{
    differentiable_restriction, lipschitz_restriction, monotone_restriction, rising_sun, Budget, CarrierBranch,
    LipschitzBranch, LipschitzCertificate, MonotoneBranch, SampledFunction,
};
use monsterlab::{Ball, Rational};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::config::Params;
use crate::render::{self, f64_rat, gapset, piecewise, rat as r, rats};
use crate::schema::set_function_json;

pub const RESTRICT: &[(&str, &str)] = &[
    ("rising-sun", "components of the rising sun set on [a, b]"),
    ("lipschitz", "closed P on which f is L-Lipschitz (param L; default twice the secant slope)"),
    ("monotone", "closed Q on which f is monotone (param levels of the dyadic tree, default 4)"),
    ("differentiable", "carrier with a controlled quotient modulus at sample resolution (param m, fewest carrier points)"),
];

pub const EXTEND: &[(&str, &str)] = &[
    ("linear", "linear interpolation across the gaps"),
    ("hat", "the data on hat(Q), with the gap slope on each middle third"),
    ("jarnik", "Jarník differentiable extension with adjustors, certificate and 5ε schedule"),
    ("c1", "C^1 admissibility criterion (--tol, default 1/4)"),
    ("whitney-check", "band maxima of the Whitney remainders (--tol, default 1/100; param scales)"),
    ("whitney", "Whitney C^n extension and its jet probe"),
    ("twisted", "nowhere-monotone-at-resolution twist of the Jarník extension by the monster"),
];

fn lib<T>(r: monsterlab::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!("{e}"))
}

fn branch_name(c: &LipschitzCertificate) -> &'static str {
    match c.branch {
        LipschitzBranch::Constant => "constant",
        LipschitzBranch::RisingSun => "rising-sun",
    }
}

fn lipschitz_json(c: &LipschitzCertificate) -> Value {
    json!({
        "P": gapset(&c.p),
        "L": r(&c.l),
        "gap_length_sum": r(&c.gap_length_sum),
        "bound": r(&c.bound),
        "pairwise_checked": c.pairwise_checked,
        "pairwise_failed": c.pairwise_failed,
        "a_bar": r(&c.a_bar),
        "decreasing": c.decreasing,
        "branch": branch_name(c),
        "bound_holds": c.bound_holds(),
        "ok": c.ok(),
    })
}

pub fn restrict(name: &str, f: &SampledFunction, params: &Params) -> Result<Value> {
    let first = f.samples.first().ok_or_else(|| anyhow!("no samples"))?;
    let last = f.samples.last().expect("nonempty");
    let a = params.rational("a")?.unwrap_or_else(|| first.x.clone());
    let b = params.rational("b")?.unwrap_or_else(|| last.x.clone());
    let mut out = json!({"pipeline": name, "a": r(&a), "b": r(&b), "samples": f.len()});
    match name {
        "rising-sun" => {
            let comps = lib(rising_sun(f, &a, &b))?;
            let mut ordered = true;
            for (c, d) in &comps {
                ordered &= lib(f.eval(c))? <= lib(f.eval(d))?;
            }
            out["components"] = comps.iter().map(|(c, d)| json!([r(c), r(d)])).collect();
            out["g_c_le_g_d"] = ordered.into();
        }
        "lipschitz" => {
            let l = match params.rational("L")? {
                Some(l) => l,
                None => {
                    let secant = ((lib(f.eval(&b))? - lib(f.eval(&a))?) / (&b - &a)).abs();
                    if secant.is_positive() {
                        secant * int(2)
                    } else {
                        int(1)
                    }
                }
            };
            out["certificate"] = lipschitz_json(&lib(lipschitz_restriction(f, &a, &b, &l))?);
        }
        "monotone" => {
            let p = lib(monsterlab::perfectsets::GapSet::interval(a.clone(), b.clone()))?;
            let m = lib(monotone_restriction(f, &p, params.usize("levels")?.unwrap_or(4)))?;
            out["certificate"] = json!({
                "Q": gapset(&m.q),
                "branch": match m.branch {
                    MonotoneBranch::Monotone => "monotone",
                    MonotoneBranch::Tree => "tree",
                    MonotoneBranch::Constant => "constant",
                },
                "increasing": m.increasing,
                "levels": m.levels.iter().map(|lv| lv.iter().map(|(u, v)| json!([r(u), r(v)])).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "pairwise_checked": m.checked,
                "pairwise_failed": m.failed,
                "ok": m.ok(),
            });
        }
        "differentiable" => {
            let mut budget = Budget::default();
            if let Some(m) = params.usize("m")? {
                budget.m = m;
            }
            let d = lib(differentiable_restriction(f, &a, &b, &budget))?;
            let branch = match &d.branch {
                CarrierBranch::Monotone(c) => json!({"kind": "monotone", "lipschitz": lipschitz_json(c)}),
                CarrierBranch::Constant { value } => json!({"kind": "constant", "value": r(value)}),
                CarrierBranch::LevelSet { level } => json!({"kind": "level-set", "level": r(level)}),
            };
            out["certificate"] = json!({
                "Q": gapset(&d.q),
                "branch": branch,
                "carrier_points": d.carrier_points,
                "dropped": d.dropped,
                "unrefined": d.unrefined,
                "modulus": {
                    "points": d.modulus.points,
                    "pairs": d.modulus.pairs,
                    "m_bound": r(&d.modulus.m_bound),
                    "omega": d.modulus.omega.iter().map(|(s, w)| json!([f64_rat(*s), f64_rat(*w)])).collect::<Vec<_>>(),
                },
                "derivatives": d.derivatives.iter().map(|(x, v)| json!([r(x), f64_rat(*v)])).collect::<Vec<_>>(),
            });
        }
        _ => bail!("unknown pipeline {name:?}"),
    }
    Ok(out)
}

fn adjustor_json(ad: &Adjustor) -> Value {
    json!({
        "index": ad.index,
        "gap": [r(&ad.a), r(&ad.b)],
        "ell": r(&ad.ell),
        "eps": r(&ad.eps),
        "slope": r(&ad.slope),
        "h_a": r(&ad.h_a),
        "h_b": r(&ad.h_b),
        "s": r(&ad.s),
        "t": r(&ad.t),
        "A": r(&ad.coef_a),
        "B": r(&ad.coef_b),
        "g_sup": r(&ad.g_sup()),
    })
}

pub fn extend(name: &str, f: &SetFunction, tol: Option<&Rational>, params: &Params) -> Result<Value> {
    let mut out = json!({"pipeline": name, "order": f.order, "carrier": gapset(&f.carrier)});
    match name {
        "linear" => out["extension"] = piecewise(&lib(linear_interpolate(f))?),
        "hat" => out["hat"] = set_function_json(&lib(hat_f(f))?),
        "jarnik" => {
            let ext = lib(jarnik_extend(f))?;
            let kmax = params.usize("kmax")?.unwrap_or(20) as u32;
            let mmax = params.usize("mmax")?.unwrap_or(10) as u32;
            let sched = fdiff_schedule(&ext, kmax, mmax);
            out["extension"] = piecewise(&ext.eval);
            out["max_degree"] = ext.eval.max_degree().into();
            out["adjustors"] = ext.adjustors.iter().map(adjustor_json).collect();
            out["certificate"] = render::sweep(&ext.certify());
            out["fdiff"] = json!({
                "kmax": kmax,
                "mmax": mmax,
                "ok": sched.ok(),
                "finest_k": sched.rows.iter().map(|row| row.kmax).max().unwrap_or(kmax),
                "rows": sched.rows.iter().map(|row| json!({
                    "x": r(&row.x),
                    "direction": if row.right { "right" } else { "left" },
                    "kmax": row.kmax,
                    "k_from": row.k_m,
                    "admitted": row.admitted,
                    "admitted_failed": row.admitted_failed,
                })).collect::<Vec<_>>(),
            });
        }
        "c1" => {
            let tol = tol.cloned().unwrap_or_else(|| rat(1, 4));
            let rep = lib(c1_criterion(f, &tol))?;
            out["tol"] = r(&tol);
            out["report"] = json!({
                "ok": rep.ok,
                "omega": r(&rep.omega),
                "scale": rep.scale.as_ref().map(r),
                "witness": rep.witness.as_ref().map(r),
                "witness_gap": rep.witness_gap.as_ref().map(|(a, b)| json!([r(a), r(b)])),
                "ladder": rep.ladder.iter().map(|(d, w)| json!([r(d), r(w)])).collect::<Vec<_>>(),
            });
        }
        "whitney-check" => {
            let tol = tol.cloned().unwrap_or_else(|| rat(1, 100));
            let n = params.usize("scales")?.unwrap_or(5) as i32;
            let scales: Vec<Rational> = (1..=n).map(|k| rpow(&int(3), -k)).collect();
            let rep = lib(whitney_check(f, &tol, &scales))?;
            out["tol"] = r(&tol);
            out["report"] = json!({
                "order": rep.order,
                "scales": rats(&rep.scales),
                "pairs": rep.pairs,
                "passed": rep.passed,
                "divergent": rep.divergent,
                "rows": rep.rows.iter().map(|row| json!({
                    "i": row.i,
                    "band_max": row.band_max.iter().map(|m| m.as_ref().map(r)).collect::<Vec<_>>(),
                    "band_min": row.band_min.iter().map(|m| m.as_ref().map(r)).collect::<Vec<_>>(),
                    "worst": row.worst.as_ref().map(|(a, b)| json!([r(a), r(b)])),
                    "divergent": row.divergent,
                })).collect::<Vec<_>>(),
            });
        }
        "whitney" => {
            let ext = lib(whitney_extend(f))?;
            let probe = jet_probe(&ext, f, 1e-6);
            out["extension"] = piecewise(&ext);
            out["jet_probe"] = json!({
                "tol": 1e-6,
                "checked": probe.checked,
                "max_err": probe.max_err,
                "failures": probe.failures.iter().map(|(x, i, e)| json!([r(x), i, e])).collect::<Vec<_>>(),
                "ok": probe.ok(),
            });
        }
        "twisted" => {
            let p = PompeiuSpec::standard();
            let t = params.rational("t")?.unwrap_or_else(|| rat(1, 4));
            let tf = monsterlab::evalcore::rational_to_f64(&t);
            let mon = move |u: f64| monster_eval(&p, tf, u);
            let src = lib(TwistSource::scan(&mon, 0.0, 1.0 / 4096.0, 4096))?;
            let mut settings = TwistSettings::default();
            if let Some(res) = params.usize("resolution")? {
                settings.resolution = res as u32;
            }
            if let Some(k) = params.usize("retries")? {
                settings.retries = k;
            }
            let tw = lib(twisted_extend(f, &src, &settings))?;
            out["t"] = r(&t);
            out["source"] = json!({"down": f64_rat(tw.down), "up": f64_rat(tw.up), "step": f64_rat(tw.step)});
            out["resolution"] = settings.resolution.into();
            out["attempts"] = tw.attempts.into();
            out["ok"] = tw.ok().into();
            out["gaps"] = tw
                .gaps
                .iter()
                .map(|g| {
                    json!({
                        "gap": [r(&g.a), r(&g.b)],
                        "slope_bound": f64_rat(g.slope_bound),
                        "windows": g.windows.len(),
                        "monotone_cells": g.monotone_cells,
                    })
                })
                .collect();
            out["base"] = piecewise(&tw.base.eval);
        }
        _ => bail!("unknown pipeline {name:?}"),
    }
    Ok(out)
}

pub struct MonsterDemo {
    pub t: f64,
    pub json: Value,
}

pub fn monster_demo() -> Result<MonsterDemo> {
    let p = PompeiuSpec::standard();
    let spec = lib(search_monster(&p, &MonsterSearch::default()))?;
    let mut witnesses = Vec::new();
    for c in &spec.certs {
        let plus = lib(monster_quotients(&p, spec.t, spec.t + c.d, 12..=26))?;
        let minus = lib(monster_quotients(&p, spec.t, c.d, 12..=26))?;
        witnesses.push(json!({
            "d": f64_rat(c.d),
            "anchor": c.anchor,
            "side": match c.side { AnchoredSide::Plus => "t+d", AnchoredSide::Minus => "d-t" },
            "g_prime_lower": f64_rat(c.g_prime_lower),
            "h_prime_estimate": f64_rat(c.h_prime_estimate),
            "positive_at_t_plus_d": signs_hold(&plus, true),
            "negative_at_d": signs_hold(&minus, false),
            "quotients_at_t_plus_d": plus.iter().map(ball_json).collect::<Vec<_>>(),
            "quotients_at_d": minus.iter().map(ball_json).collect::<Vec<_>>(),
        }));
    }
    let json = json!({
        "t": f64_rat(spec.t),
        "scales": (12..=26).map(|k| format_rational(&rpow(&int(2), -k))).collect::<Vec<_>>(),
        "witnesses": witnesses,
    });
    Ok(MonsterDemo { t: spec.t, json })
}

fn ball_json(b: &Ball) -> Value {
    json!({"center": f64_rat(b.center), "radius": f64_rat(b.radius)})
}
