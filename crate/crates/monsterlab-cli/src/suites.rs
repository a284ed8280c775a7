//! Verification suites behind `monsterlab verify`.
//!
//! Each suite returns a [`SweepReport`] and a map of notes. Randomized suites draw
//! from a ChaCha8 stream seeded with `--seed`, so a fixed seed gives identical output.

use std::f64::consts::PI;

use anyhow::{anyhow, Result};
use monsterlab::evalcore::{derivative_estimate, int, rat, rational_to_f64, rpow, RatPoly};
use monsterlab::extend::{
    c1_criterion, ex111_one_check, ex111_set_function, fdiff_schedule, jarnik_extend, jet_probe, staircase,
    whitney_check, whitney_extend, Jet, SetFunction,
};
use monsterlab::monsters::{eta_prime, monster_quotients, search_monster, signs_hold, sweep_takagi_anchor, volterra_h};
use monsterlab::monsters::{MonsterSearch, PompeiuSpec};
use monsterlab::perfectsets::{
    cantor_ternary, sweep_containment, sweep_contraction, sweep_injectivity, sweep_odometer, sweep_property_a,
    sweep_property_b, GapSet, Generator, SweepReport,
};
use monsterlab::restrict::{lipschitz_restriction, rising_sun_points, SampledFunction};
use monsterlab::{Ball, Rational};
use num_traits::{Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::config::Params;
use crate::registry::sin_jet;
use crate::render;

pub struct SuiteArgs<'a> {
    pub depth: Option<u32>,
    pub seed: u64,
    pub tol: Option<Rational>,
    pub params: &'a Params,
}

#[derive(Default)]
pub struct SuiteResult {
    pub report: SweepReport,
    pub notes: Map<String, Value>,
}

impl SuiteResult {
    fn note(&mut self, k: &str, v: impl Into<Value>) {
        self.notes.insert(k.to_string(), v.into());
    }
}

pub type SuiteFn = fn(&SuiteArgs) -> Result<SuiteResult>;

/// Name, description, runner.
pub const SUITES: &[(&str, &str, SuiteFn)] = &[
    ("squeeze", "difference quotients of x^2 sin(1/x) at 0 are bounded by the scale", squeeze),
    ("takagi-anchor", "anchor quotients of the Takagi-type sum over all j/8^d, n <= d (--depth, default 6)", takagi_anchor),
    ("embedding-a", "carry pattern of the odometer code over all prefixes (--depth, default 16)", embedding_a),
    ("embedding-b", "two-sided separation of the Cantor embedding over all pairs (--depth, default 12)", embedding_b),
    ("contraction", "odometer contraction ratio on eligible pairs (--depth, default 12)", contraction),
    ("rising-sun", "scan components against a definition-based oracle on random piecewise-linear data", rising_sun),
    ("lipschitz", "Lipschitz restriction certificates on random monotone data", lipschitz),
    ("jarnik", "Jarník extension certificates and the 5ε schedule on random carriers", jarnik),
    ("whitney", "Whitney check and jet reproduction for x^2, x^3, sin; divergence on ex111", whitney),
    ("ex111-one", "lower bound on |f(b)-f(a)|/(b-a)^2 over all endpoint pairs (--depth, default 10)", ex111_one),
    ("monster-signs", "quotient signs of the differentiable monster at t+d and d", monster_signs),
    ("eta", "|eta'| < 1 on (0, 1/3] and eta' near -1 at 1/(2 pi n)", eta),
    ("c1-staircase", "C^1 criterion on staircase families (--depth segments, default 12)", c1_staircase),
    ("odometer", "the odometer visits every prefix of each length once (--depth, default 16)", odometer),
    ("injectivity", "cylinder enclosures of the embedding are disjoint (--depth, default 12)", injectivity),
    ("containment", "embedding images stay in the middle-thirds approximation (--depth, default 12)", containment),
];

pub fn find(name: &str) -> Option<SuiteFn> {
    SUITES.iter().find(|(k, _, _)| *k == name).map(|(_, _, f)| *f)
}

fn count(args: &SuiteArgs, default: usize) -> Result<usize> {
    Ok(args.params.usize("count")?.unwrap_or(default))
}

fn below(rng: &mut ChaCha8Rng, n: u64) -> i64 {
    rng.random_range(0..n) as i64
}

fn squeeze(args: &SuiteArgs) -> Result<SuiteResult> {
    let kmax = args.depth.unwrap_or(30) as i32;
    let scales: Vec<f64> = (4..=kmax).map(|k| 2f64.powi(-k)).collect();
    let mut out = SuiteResult::default();
    let rep = &mut out.report;
    for s in derivative_estimate(volterra_h, 0.0, &scales).map_err(|e| anyhow!("{e}"))? {
        for (side, q) in [("symmetric", s.symmetric), ("forward", s.forward), ("backward", s.backward)] {
            rep.cases += 1;
            if q.center.abs() > s.scale + q.radius {
                rep.fail(|| format!("{side} quotient {} at scale {}", q.center, s.scale));
            }
        }
    }
    // |h(x)/x| <= |x| away from 0
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let n = count(args, 10_000)?;
    for _ in 0..n {
        let x: f64 = rng.random_range(-2.0..2.0);
        if x == 0.0 {
            continue;
        }
        rep.cases += 1;
        let q = volterra_h(x) / Ball::exact(x);
        if q.center.abs() > x.abs() + q.radius {
            rep.fail(|| format!("|h(x)/x| > |x| at {x}"));
        }
    }
    out.note("scales", json!({"from": "2^-4", "to": format!("2^-{kmax}")}));
    Ok(out)
}

fn takagi_anchor(args: &SuiteArgs) -> Result<SuiteResult> {
    let d = args.depth.unwrap_or(6).clamp(1, 8);
    let mut out = SuiteResult { report: sweep_takagi_anchor(d), ..Default::default() };
    out.note("depth", d);
    out.note("points", 8u64.pow(d) + 1);
    Ok(out)
}

fn embedding_a(args: &SuiteArgs) -> Result<SuiteResult> {
    let d = args.depth.unwrap_or(16).clamp(1, 24);
    let mut out = SuiteResult { report: sweep_property_a(d as usize), ..Default::default() };
    out.note("depth", d);
    Ok(out)
}

fn embedding_b(args: &SuiteArgs) -> Result<SuiteResult> {
    let d = args.depth.unwrap_or(12).clamp(1, 14);
    let mut out = SuiteResult { report: sweep_property_b(d, |_, _| true), ..Default::default() };
    out.note("depth", d);
    out.note("pairs", "all unordered pairs");
    Ok(out)
}

fn contraction(args: &SuiteArgs) -> Result<SuiteResult> {
    let d = args.depth.unwrap_or(12).clamp(2, 14);
    let mut out = SuiteResult { report: sweep_contraction(d, |_, _| true), ..Default::default() };
    out.note("depth", d);
    out.note("pairs", "unordered pairs whose first disagreement avoids the carry index of both");
    Ok(out)
}

fn odometer(args: &SuiteArgs) -> Result<SuiteResult> {
    let d = args.depth.unwrap_or(16).min(24);
    Ok(SuiteResult { report: sweep_odometer(d as usize), ..Default::default() })
}

fn injectivity(args: &SuiteArgs) -> Result<SuiteResult> {
    let d = args.depth.unwrap_or(12).clamp(1, 20);
    Ok(SuiteResult { report: sweep_injectivity(d), ..Default::default() })
}

fn containment(args: &SuiteArgs) -> Result<SuiteResult> {
    let d = args.depth.unwrap_or(12).clamp(1, 20);
    Ok(SuiteResult { report: sweep_containment(d), ..Default::default() })
}

fn random_pl(rng: &mut ChaCha8Rng, max_breaks: u64) -> Vec<(Rational, Rational)> {
    let n = 2 + below(rng, max_breaks - 1) as usize;
    let mut x = int(below(rng, 5) - 2);
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push((x.clone(), rat(below(rng, 13) - 6, 1 + below(rng, 3))));
        x += rat(1 + below(rng, 4), 1 + below(rng, 2));
    }
    pts
}

fn pl_value(pts: &[(Rational, Rational)], x: &Rational) -> Rational {
    let i = pts.iter().position(|p| &p.0 >= x).expect("x inside the samples");
    if pts[i].0 == *x {
        return pts[i].1.clone();
    }
    let (x0, v0) = &pts[i - 1];
    let (x1, v1) = &pts[i];
    v0 + (v1 - v0) * (x - x0) / (x1 - x0)
}

/// Components of `{x in [a, b): g(x) < g(y) for some y in (x, b]}` from the definition:
/// membership is tested at every breakpoint, every crossing of a breakpoint level and
/// every midpoint between consecutive candidates.
fn oracle_components(pts: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let b = pts.last().expect("nonempty").0.clone();
    let member = |x: &Rational| -> bool {
        if x >= &b {
            return false;
        }
        let gx = pl_value(pts, x);
        pts.iter().any(|(p, v)| p > x && v > &gx)
    };
    let mut cand: Vec<Rational> = pts.iter().map(|p| p.0.clone()).collect();
    for w in pts.windows(2) {
        let ((x0, v0), (x1, v1)) = (&w[0], &w[1]);
        if v0 == v1 {
            continue;
        }
        for (_, c) in pts {
            let t = (c - v0) / (v1 - v0);
            if t.is_positive() && t < int(1) {
                cand.push(x0 + t * (x1 - x0));
            }
        }
    }
    cand.sort();
    cand.dedup();
    let mut out = Vec::new();
    let mut open: Option<Rational> = None;
    let mut step = |inside: bool, at: &Rational, open: &mut Option<Rational>| match (open.take(), inside) {
        (None, true) => *open = Some(at.clone()),
        (Some(s), false) => out.push((s, at.clone())),
        (o, _) => *open = o,
    };
    for k in 0..cand.len() {
        step(member(&cand[k]), &cand[k], &mut open);
        if k + 1 < cand.len() {
            let mid = (&cand[k] + &cand[k + 1]) / int(2);
            step(member(&mid), &cand[k], &mut open);
        }
    }
    if let Some(s) = open {
        out.push((s, b));
    }
    out
}

fn rising_sun(args: &SuiteArgs) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let n = count(args, 1000)?;
    let mut out = SuiteResult::default();
    let mut components = 0u64;
    for case in 0..n {
        let pts = random_pl(&mut rng, 12);
        let scan = rising_sun_points(&pts);
        out.report.cases += 1;
        if scan != oracle_components(&pts) {
            out.report.fail(|| format!("case {case}: scan and oracle components differ"));
        }
        let f = SampledFunction::piecewise_linear(pts).map_err(|e| anyhow!("{e}"))?;
        for (c, d) in &scan {
            components += 1;
            out.report.cases += 1;
            if f.eval(c).map_err(|e| anyhow!("{e}"))? > f.eval(d).map_err(|e| anyhow!("{e}"))? {
                out.report.fail(|| format!("case {case}: g(c) > g(d) on ({c}, {d})"));
            }
        }
    }
    out.note("functions", n);
    out.note("components", components);
    Ok(out)
}

fn lipschitz(args: &SuiteArgs) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let n = count(args, 100)?;
    let mut out = SuiteResult::default();
    let mut pairs = 0u64;
    for case in 0..n {
        let m = 3 + below(&mut rng, 30) as usize;
        let mut pts = Vec::with_capacity(m);
        let (mut x, mut v) = (int(0), int(0));
        for _ in 0..m {
            pts.push((x.clone(), v.clone()));
            x += rat(1 + below(&mut rng, 5), 1 + below(&mut rng, 3));
            let steep = below(&mut rng, 4) == 0;
            v += rat(1 + below(&mut rng, if steep { 60 } else { 6 }), 1 + below(&mut rng, 3));
        }
        let f = SampledFunction::piecewise_linear(pts.clone()).map_err(|e| anyhow!("{e}"))?;
        let (a, b) = (pts[0].0.clone(), pts[m - 1].0.clone());
        let secant = (&pts[m - 1].1 - &pts[0].1) / (&b - &a);
        let l = secant * rat(11 + below(&mut rng, 30), 10);
        let cert = lipschitz_restriction(&f, &a, &b, &l).map_err(|e| anyhow!("case {case}: {e}"))?;
        let at = |what: &str| format!("case {case}: {what}");
        let rep = &mut out.report;
        rep.cases += 1;
        if !cert.ok() {
            rep.fail(|| at("certificate not ok"));
        }
        rep.cases += 1;
        if !(cert.gap_length_sum <= cert.bound && cert.bound < &b - &cert.a_bar) {
            rep.fail(|| at("gap length chain fails"));
        }
        for (c, d) in &cert.p.gaps {
            rep.cases += 1;
            if f.eval(d).map_err(|e| anyhow!("{e}"))? - f.eval(c).map_err(|e| anyhow!("{e}"))? < &l * (d - c) {
                rep.fail(|| at("removed component with f(d) - f(c) < L (d - c)"));
            }
        }
        // Independent pairwise check over the model breakpoints in P and P's endpoints.
        let mut xs: Vec<Rational> = pts.iter().map(|p| p.0.clone()).filter(|x| cert.p.contains(x)).collect();
        xs.extend(cert.p.endpoints());
        xs.sort();
        xs.dedup();
        let vals: Vec<Rational> = xs.iter().map(|x| pl_value(&pts, x)).collect();
        let mut bad = 0u64;
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                pairs += 1;
                if (&vals[j] - &vals[i]).abs() > &l * (&xs[j] - &xs[i]) {
                    bad += 1;
                }
            }
        }
        rep.cases += 1;
        if bad > 0 {
            rep.fail(|| at(&format!("{bad} pairs break the Lipschitz bound")));
        }
    }
    out.note("functions", n);
    out.note("pairs_checked", pairs);
    Ok(out)
}

/// A carrier on `[0, 8]` with gaps cut at multiples of 1/8 and jets `(v, d/2)`.
fn random_carrier(rng: &mut ChaCha8Rng, gaps: usize) -> Result<SetFunction> {
    let mut cuts: Vec<i64> = sample(rng, 63, 2 * gaps).into_iter().map(|c| c as i64 + 1).collect();
    cuts.sort();
    let g: Vec<(Rational, Rational)> = cuts.chunks(2).map(|c| (rat(c[0], 8), rat(c[1], 8))).collect();
    let carrier = GapSet::new(int(0), int(8), g, Generator::Explicit).map_err(|e| anyhow!("{e}"))?;
    let jets = carrier
        .endpoints()
        .into_iter()
        .map(|x| Jet::new(x, vec![int(below(rng, 12) - 6), rat(below(rng, 8) - 4, 2)]))
        .collect();
    SetFunction::new(carrier, jets).map_err(|e| anyhow!("{e}"))
}

fn jarnik(args: &SuiteArgs) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let n = count(args, 100)?;
    let kmax = args.depth.unwrap_or(20);
    let mmax = args.params.usize("mmax")?.unwrap_or(10) as u32;
    let mut out = SuiteResult::default();
    let (mut rows, mut beyond, mut finest, mut admitted) = (0u64, 0u64, 0u32, 0u64);
    for case in 0..n {
        let gaps = if case % 2 == 0 { 1 } else { 2 + below(&mut rng, 3) as usize };
        let f = random_carrier(&mut rng, gaps)?;
        let ext = jarnik_extend(&f).map_err(|e| anyhow!("case {case}: {e}"))?;
        let mut cert = ext.certify();
        cert.witnesses.iter_mut().for_each(|w| *w = format!("case {case}: {w}"));
        out.report.merge(cert);
        for j in &f.jets {
            out.report.cases += 1;
            if !ext.g(&j.point).is_zero() {
                out.report.fail(|| format!("case {case}: g != 0 on the carrier"));
            }
        }
        let sched = fdiff_schedule(&ext, kmax, mmax);
        for r in &sched.rows {
            rows += 1;
            finest = finest.max(r.kmax);
            if r.kmax > kmax {
                beyond += 1;
            }
            let dir = if r.right { "right" } else { "left" };
            out.report.cases += 1;
            if r.k_m.iter().any(Option::is_none) {
                out.report.fail(|| format!("case {case}: 5ε schedule misses at {} ({dir})", r.x));
            }
            admitted += u64::from(r.admitted);
            out.report.cases += u64::from(r.admitted);
            for _ in 0..r.admitted_failed {
                out.report.fail(|| format!("case {case}: quotient of F beyond 5ε inside an admitted δ at {} ({dir})", r.x));
            }
        }
    }
    out.note("carriers", n);
    out.note("kmax", kmax);
    out.note("mmax", mmax);
    out.note("schedule_rows", rows);
    out.note("admitted_scales", admitted);
    out.note("rows_beyond_kmax", beyond);
    out.note("finest_k", finest);
    Ok(out)
}

fn whitney(args: &SuiteArgs) -> Result<SuiteResult> {
    let depth = args.depth.unwrap_or(8);
    let tol = args.tol.clone().unwrap_or_else(|| rat(1, 100));
    let probe_tol = 1e-6;
    let scales: Vec<Rational> = (2..=7).map(|k| rpow(&int(3), -k)).collect();
    let carrier = cantor_ternary(depth);
    let mut out = SuiteResult::default();
    let mut worst_probe = 0.0f64;
    for n in [1usize, 2] {
        let sources: [(&str, SetFunction); 3] = [
            ("x2", SetFunction::from_poly(carrier.clone(), &RatPoly::from_ints(&[0, 0, 1]), n, &[]).map_err(|e| anyhow!("{e}"))?),
            ("x3", SetFunction::from_poly(carrier.clone(), &RatPoly::from_ints(&[0, 0, 0, 1]), n, &[]).map_err(|e| anyhow!("{e}"))?),
            ("sin", SetFunction::from_jet_fn(carrier.clone(), &[], |x| sin_jet(x, n)).map_err(|e| anyhow!("{e}"))?),
        ];
        for (name, f) in sources {
            let rep = whitney_check(&f, &tol, &scales).map_err(|e| anyhow!("{e}"))?;
            out.report.cases += 1;
            if !rep.passed || rep.divergent {
                out.report.fail(|| format!("{name}, n={n}: whitney_check does not pass"));
            }
            let ext = whitney_extend(&f).map_err(|e| anyhow!("{e}"))?;
            let probe = jet_probe(&ext, &f, probe_tol);
            worst_probe = worst_probe.max(probe.max_err);
            out.report.cases += probe.checked;
            out.report.failed += probe.failures.len() as u64;
            for (x, i, err) in probe.failures.iter().take(4) {
                out.report.witnesses.push(format!("{name}, n={n}: derivative {i} at {x} off by {err:e}"));
            }
        }
    }
    let e = ex111_set_function(6).map_err(|e| anyhow!("{e}"))?;
    let ex_scales: Vec<Rational> = (1..=5).map(|k| rpow(&int(3), -k)).collect();
    let rep = whitney_check(&e, &tol, &ex_scales).map_err(|e| anyhow!("{e}"))?;
    out.report.cases += 1;
    if !rep.divergent || rep.passed {
        out.report.fail(|| "ex111 data not reported divergent".into());
    }
    let one = ex111_one_check(11);
    out.report.merge(one);
    out.note("cantor_depth", depth);
    out.note("tol", render::rat(&tol));
    out.note("probe_tol", probe_tol);
    out.note("probe_max_err", worst_probe);
    out.note("ex111_divergent", rep.divergent);
    out.note("ex111_one_depth", 11);
    Ok(out)
}

fn ex111_one(args: &SuiteArgs) -> Result<SuiteResult> {
    let d = args.depth.unwrap_or(10);
    let mut out = SuiteResult { report: ex111_one_check(d), ..Default::default() };
    out.note("depth", d);
    Ok(out)
}

fn monster_signs(args: &SuiteArgs) -> Result<SuiteResult> {
    let p = PompeiuSpec::standard();
    let mut cfg = MonsterSearch::default();
    if let Some(w) = args.params.usize("witnesses")? {
        cfg.wanted = w;
    }
    let spec = search_monster(&p, &cfg).map_err(|e| anyhow!("{e}"))?;
    let mut out = SuiteResult::default();
    out.report.cases += 1;
    if spec.certs.len() < 8 {
        let got = spec.certs.len();
        out.report.fail(|| format!("only {got} certified witnesses"));
    }
    let mut ds = Vec::new();
    for c in &spec.certs {
        for (x, positive) in [(spec.t + c.d, true), (c.d, false)] {
            out.report.cases += 1;
            let qs = monster_quotients(&p, spec.t, x, 12..=26).map_err(|e| anyhow!("{e}"))?;
            if !signs_hold(&qs, positive) {
                out.report.fail(|| format!("sign pattern fails at {x}"));
            }
        }
        ds.push(render::f64_rat(c.d));
    }
    out.note("t", render::f64_rat(spec.t));
    out.note("witnesses", ds);
    out.note("scales", "2^-12 .. 2^-26");
    Ok(out)
}

fn eta(args: &SuiteArgs) -> Result<SuiteResult> {
    let n = count(args, 10_000)? as i64;
    let mut out = SuiteResult::default();
    let rep = &mut out.report;
    let (one, two, three) = (int(1), int(2), int(3));
    for j in 1..=n {
        let xq = rat(j, 3 * n);
        let x = rational_to_f64(&xq);
        rep.cases += 1;
        // |eta'| <= e^{-3x}(3x^2 + 2x + 1) <= (1 + 3x) e^{-3x} < 1
        let tx = &three * &xq;
        let poly = &three * &xq * &xq + &two * &xq + &one;
        let chain = poly <= &one + &tx && &one + &tx < &one + &tx + &tx * &tx / &two;
        if !chain || eta_prime(x).mag() >= 1.0 {
            rep.fail(|| format!("|eta'| bound at {xq}"));
        }
    }
    let mut worst = 0.0f64;
    for k in 1000..=10_000u32 {
        let x = 1.0 / (2.0 * PI * k as f64);
        let v = eta_prime(x);
        rep.cases += 1;
        worst = worst.max((v.center + 1.0).abs() + v.radius);
        if (v.center + 1.0).abs() + v.radius >= 1e-3 {
            rep.fail(|| format!("eta'(1/(2 pi {k})) = {} not within 1e-3 of -1", v.center));
        }
    }
    out.note("grid", n);
    out.note("max_distance_from_minus_one", worst);
    Ok(out)
}

fn c1_staircase(args: &SuiteArgs) -> Result<SuiteResult> {
    let segs = args.depth.unwrap_or(12);
    let tol = args.tol.clone().unwrap_or_else(|| rat(1, 4));
    let mut out = SuiteResult::default();
    let (mut rejected, mut accepted) = (0u64, 0u64);
    for i in 0..20i64 {
        // r = 1: secant slopes stay at lambda
        let lambda = rat(1, 2) + rat(7 * i, 38);
        let rep = c1_criterion(&staircase(segs, &lambda, &int(1)).map_err(|e| anyhow!("{e}"))?, &tol).map_err(|e| anyhow!("{e}"))?;
        out.report.cases += 1;
        if rep.ok {
            out.report.fail(|| format!("r=1, lambda={lambda} accepted"));
        } else {
            rejected += 1;
        }
        // r in [1/5, 7/10]: slopes tend to 0
        let r = rat(1, 5) + rat(i, 38);
        let lambda = rat(1, 2) + rat(i % 5, 2);
        let rep = c1_criterion(&staircase(segs, &lambda, &r).map_err(|e| anyhow!("{e}"))?, &tol).map_err(|e| anyhow!("{e}"))?;
        out.report.cases += 1;
        if rep.ok {
            accepted += 1;
        } else {
            out.report.fail(|| format!("r={r}, lambda={lambda} rejected"));
        }
    }
    out.note("segments", segs);
    out.note("tol", render::rat(&tol));
    out.note("rejected_bounded_slopes", rejected);
    out.note("accepted_vanishing_slopes", accepted);
    Ok(out)
}

pub fn run(name: &str, args: &SuiteArgs) -> Result<Value> {
    let f = find(name).ok_or_else(|| anyhow!("unknown suite {name:?}"))?;
    let res = f(args)?;
    let mut v = json!({"suite": name});
    for (k, x) in render::sweep(&res.report).as_object().expect("object") {
        v[k] = x.clone();
    }
    v["notes"] = Value::Object(res.notes);
    Ok(v)
}
