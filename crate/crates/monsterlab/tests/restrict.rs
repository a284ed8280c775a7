use monsterlab::evalcore::{int, rat, Rational};
use monsterlab::monsters::{takagi, volterra_h, TakagiSpec};
use monsterlab::perfectsets::{cantor_ternary, GapSet};
use monsterlab::restrict::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn below(rng: &mut ChaCha8Rng, n: u64) -> i64 {
    rng.random_range(0..n) as i64
}

fn pl(points: &[(i64, i64)]) -> SampledFunction {
    SampledFunction::piecewise_linear(points.iter().map(|&(x, v)| (int(x), int(v))).collect()).unwrap()
}

/// Components straight from the definition of the shadow set, at every breakpoint,
/// every crossing of a breakpoint level and every midpoint between those.
fn brute_rising_sun(pts: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let b = pts.last().unwrap().0.clone();
    let value = |x: &Rational| -> Rational {
        let i = pts.iter().position(|p| &p.0 >= x).unwrap();
        if pts[i].0 == *x {
            return pts[i].1.clone();
        }
        let (x0, v0) = &pts[i - 1];
        let (x1, v1) = &pts[i];
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    };
    let member = |x: &Rational| -> bool {
        if x >= &b {
            return false;
        }
        let gx = value(x);
        pts.iter().any(|(p, v)| p > x && v > &gx)
    };
    let mut cand: Vec<Rational> = pts.iter().map(|p| p.0.clone()).collect();
    for w in pts.windows(2) {
        for (_, c) in pts {
            let (x0, v0) = &w[0];
            let (x1, v1) = &w[1];
            if v0 != v1 {
                let t = (c - v0) / (v1 - v0);
                if t > Rational::zero() && t < Rational::from_integer(1.into()) {
                    cand.push(x0 + t * (x1 - x0));
                }
            }
        }
    }
    cand.sort();
    cand.dedup();
    // Walk points and open cells left to right, collecting maximal runs of members.
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    let mut open: Option<Rational> = None;
    for k in 0..cand.len() {
        let here = member(&cand[k]);
        match (&open, here) {
            (None, true) => open = Some(cand[k].clone()),
            (Some(s), false) => {
                out.push((s.clone(), cand[k].clone()));
                open = None;
            }
            _ => {}
        }
        if k + 1 < cand.len() {
            let mid = (&cand[k] + &cand[k + 1]) / int(2);
            let inside = member(&mid);
            match (&open, inside) {
                (None, true) => open = Some(cand[k].clone()),
                (Some(s), false) => {
                    out.push((s.clone(), cand[k].clone()));
                    open = None;
                }
                _ => {}
            }
        }
    }
    if let Some(s) = open {
        out.push((s, b));
    }
    out
}

fn random_pl(state: &mut ChaCha8Rng, max_breaks: u64) -> Vec<(Rational, Rational)> {
    let n = 2 + below(state, max_breaks - 1) as usize;
    let mut x = int(below(state, 5) - 2);
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push((x.clone(), rat(below(state, 13) - 6, 1 + below(state, 3))));
        x += rat(1 + below(state, 4), 1 + below(state, 2));
    }
    pts
}

#[test]
fn rising_sun_examples() {
    let dec = pl(&[(0, 0), (1, -1), (2, -2)]);
    assert!(rising_sun(&dec, &int(0), &int(2)).unwrap().is_empty());
    let inc = pl(&[(0, 0), (1, 1), (2, 2)]);
    assert_eq!(rising_sun(&inc, &int(0), &int(2)).unwrap(), vec![(int(0), int(2))]);
    let tent = pl(&[(0, 0), (1, 1), (2, 0)]);
    assert_eq!(rising_sun(&tent, &int(0), &int(2)).unwrap(), vec![(int(0), int(1))]);
    // A lower second peak shadows only part of the first valley.
    let two = pl(&[(0, 0), (1, 4), (2, 0), (3, 2), (4, 0)]);
    assert_eq!(
        rising_sun(&two, &int(0), &int(4)).unwrap(),
        vec![(int(0), int(1)), (rat(3, 2), int(3))]
    );
    assert!(matches!(rising_sun(&two, &int(2), &int(2)), Err(monsterlab::Error::EmptyInterval)));
}

#[test]
fn rising_sun_matches_definition() {
    let mut s = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let pts = random_pl(&mut s, 12);
        let scan = rising_sun_points(&pts);
        assert_eq!(scan, brute_rising_sun(&pts), "{pts:?}");
        let f = SampledFunction::piecewise_linear(pts.clone()).unwrap();
        for (c, d) in &scan {
            assert!(f.eval(c).unwrap() <= f.eval(d).unwrap());
        }
    }
}

#[test]
fn fact_checks() {
    let r = |a: i64| rat(a, 10);
    let cover = vec![(r(-1), r(6)), (r(5), r(11))];
    assert!(interval_cover_check(&cover, &int(0), &int(1)).unwrap());
    assert_eq!(length_sum(&cover), rat(13, 10));
    let disjoint = vec![(int(0), rat(3, 10)), (rat(5, 10), rat(9, 10))];
    assert!(interval_disjoint_sum(&disjoint, &int(0), &int(1)).unwrap());
    let holes = vec![(int(0), rat(4, 10)), (rat(6, 10), int(1))];
    assert!(!covers(&holes, &int(0), &int(1)));
    assert!(!interval_cover_check(&holes, &int(0), &int(1)).unwrap());
    // Endpoints of open intervals are not covered.
    assert!(!covers(&[(int(0), int(1))], &int(0), &int(1)));
    assert!(interval_cover_check(&[(int(1), int(0))], &int(0), &int(1)).is_err());
    assert!(interval_disjoint_sum(&[(int(0), int(2)), (int(1), int(3))], &int(0), &int(3)).is_err());
}

#[test]
fn lipschitz_linear() {
    let f = pl(&[(0, 0), (1, 3), (2, 6), (4, 12)]);
    let cert = lipschitz_restriction(&f, &int(0), &int(4), &rat(31, 10)).unwrap();
    assert_eq!(cert.p, GapSet::interval(int(0), int(4)).unwrap());
    assert!(cert.ok());
    assert!(matches!(lipschitz_restriction(&f, &int(0), &int(4), &int(3)), Err(monsterlab::Error::LipschitzTooSmall)));
    let zig = pl(&[(0, 0), (1, 2), (2, 1)]);
    assert!(matches!(lipschitz_restriction(&zig, &int(0), &int(2), &int(5)), Err(monsterlab::Error::NotMonotone)));
}

#[test]
fn lipschitz_drops_steep_segment() {
    // Average slope 13/5, steep middle segment of slope 10.
    let f = pl(&[(0, 0), (2, 1), (3, 11), (5, 13)]);
    let cert = lipschitz_restriction(&f, &int(0), &int(5), &int(4)).unwrap();
    assert!(cert.ok(), "{cert:?}");
    assert!(!cert.p.contains(&rat(5, 2)));
    // Independent check on every sample of f lying in P plus P's endpoints.
    let mut pts: Vec<(Rational, Rational)> =
        f.samples.iter().filter(|s| cert.p.contains(&s.x)).map(|s| (s.x.clone(), s.value.clone())).collect();
    for e in cert.p.endpoints() {
        pts.push((e.clone(), f.eval(&e).unwrap()));
    }
    assert_eq!(pairwise_lipschitz(&pts, &int(4)).1, 0);
}

#[test]
fn lipschitz_decreasing_and_flat() {
    let f = pl(&[(0, 8), (1, 7), (2, 0), (4, -1)]);
    let cert = lipschitz_restriction(&f, &int(0), &int(4), &int(3)).unwrap();
    assert!(cert.decreasing);
    assert!(cert.ok());
    let flat = pl(&[(0, 0), (1, 5), (3, 5), (4, 9)]);
    let cert = lipschitz_restriction(&flat, &int(0), &int(4), &int(3)).unwrap();
    assert_eq!(cert.branch, LipschitzBranch::Constant);
    assert_eq!(cert.p, GapSet::interval(int(1), int(3)).unwrap());
}

#[test]
fn lipschitz_random_monotone() {
    let mut s = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = 3 + below(&mut s, 30) as usize;
        let mut pts = Vec::with_capacity(n);
        let (mut x, mut v) = (int(0), int(0));
        for _ in 0..n {
            pts.push((x.clone(), v.clone()));
            x += rat(1 + below(&mut s, 5), 1 + below(&mut s, 3));
            let steep = below(&mut s, 4) == 0;
            v += rat(1 + below(&mut s, if steep { 60 } else { 6 }), 1 + below(&mut s, 3));
        }
        let f = SampledFunction::piecewise_linear(pts.clone()).unwrap();
        let (a, b) = (pts[0].0.clone(), pts[n - 1].0.clone());
        let secant = (&pts[n - 1].1 - &pts[0].1) / (&b - &a);
        let l = secant * rat(11 + below(&mut s, 30), 10);
        let cert = lipschitz_restriction(&f, &a, &b, &l).unwrap();
        assert!(cert.ok(), "{pts:?}");
        assert!(cert.gap_length_sum <= cert.bound && cert.bound < &b - &cert.a_bar);
        // Every component (c, d) of the removed set satisfies f(d) - f(c) >= L (d - c).
        for (c, d) in &cert.p.gaps {
            assert!(f.eval(d).unwrap() - f.eval(c).unwrap() >= &l * (d - c));
        }
    }
}

fn takagi_fn(depth: u32, grid: i64) -> SampledFunction {
    let xs: Vec<Rational> = (0..=grid).map(|j| rat(j, grid)).collect();
    SampledFunction::from_exact(GapSet::interval(int(0), int(1)).unwrap(), xs, "takagi", |x| {
        takagi(TakagiSpec { depth }, x).partial
    })
    .unwrap()
}

#[test]
fn monotone_restriction_branches() {
    let p = GapSet::interval(int(0), int(1)).unwrap();
    let xs: Vec<Rational> = (0..=32).map(|j| rat(j, 32)).collect();
    let inc = SampledFunction::from_exact(p.clone(), xs.clone(), "x", |x| x.clone()).unwrap();
    let r = monotone_restriction(&inc, &p, 3).unwrap();
    assert_eq!((r.branch, r.q.clone()), (MonotoneBranch::Monotone, p.clone()));
    let dec = SampledFunction::from_exact(p.clone(), xs, "-x", |x| -x.clone()).unwrap();
    let r = monotone_restriction(&dec, &p, 3).unwrap();
    assert_eq!((r.branch, r.q.clone(), r.increasing), (MonotoneBranch::Monotone, p.clone(), false));
}

#[test]
fn monotone_restriction_takagi_tree() {
    let p = GapSet::interval(int(0), int(1)).unwrap();
    let f = takagi_fn(2, 1024);
    let r = monotone_restriction(&f, &p, 4).unwrap();
    assert_eq!(r.branch, MonotoneBranch::Tree);
    assert_eq!(r.levels[4].len(), 16);
    assert!(r.ok() && r.checked > 0);
    for n in 1..=4 {
        for (k, (l, h)) in r.levels[n].iter().enumerate() {
            assert!(h - l <= rat(1, 1 << n));
            let (pl_, ph) = &r.levels[n - 1][k / 2];
            assert!(pl_ <= l && h <= ph);
        }
        for pair in r.levels[n].chunks(2) {
            let (i0, i1) = (&pair[0], &pair[1]);
            assert!(i0.1 < i1.0 || i1.1 < i0.0);
            let vals = |iv: &(Rational, Rational)| -> Vec<Rational> {
                f.samples.iter().filter(|s| iv.0 <= s.x && s.x <= iv.1).map(|s| s.value.clone()).collect()
            };
            let (v0, v1) = (vals(i0), vals(i1));
            let hi0 = v0.iter().max().unwrap();
            let lo1 = v1.iter().min().unwrap();
            if r.increasing {
                assert!(hi0 < lo1);
            }
        }
    }
    assert!(p.contains_set(&r.q));
}

#[test]
fn monotone_restriction_on_cantor_set() {
    let p = cantor_ternary(3);
    let xs: Vec<Rational> = (0..=729).map(|j| rat(j, 729)).filter(|x| p.contains(x)).collect();
    let f = SampledFunction::from_exact(p.clone(), xs, "takagi", |x| takagi(TakagiSpec { depth: 3 }, x).partial).unwrap();
    let r = monotone_restriction(&f, &p, 3).unwrap();
    assert!(r.ok());
    assert!(p.contains_set(&r.q));
}

#[test]
fn constant_branch() {
    let p = GapSet::interval(int(0), int(4)).unwrap();
    let xs: Vec<Rational> = (0..=16).map(|j| rat(j, 4)).collect();
    let f = SampledFunction::from_exact(p.clone(), xs, "one", |_| int(1)).unwrap();
    let r = monotone_restriction(&f, &p, 5).unwrap();
    assert_eq!((r.branch, r.q.clone()), (MonotoneBranch::Constant, p.clone()));
    assert!(r.ok());
    // Rises, stays flat on [1, 3], falls.
    let xs: Vec<Rational> = (0..=64).map(|j| rat(j, 16)).collect();
    let g = SampledFunction::from_exact(p.clone(), xs, "clamp", |x| {
        let one = int(1);
        if x <= &one {
            x.clone()
        } else if x <= &int(3) {
            one
        } else {
            int(4) - x
        }
    })
    .unwrap();
    // The tree follows the rising part; at depth 6 it runs out of samples there.
    let r = monotone_restriction(&g, &p, 3).unwrap();
    assert_eq!(r.branch, MonotoneBranch::Tree);
    assert!(r.ok() && p.contains_set(&r.q));
    assert!(matches!(monotone_restriction(&g, &p, 6), Err(monsterlab::Error::TooFewSamples)));
}

#[test]
fn modulus_examples() {
    let scales = [0.25, 0.0625, 0.015625];
    let lin = pl(&[(0, 1), (1, 4), (2, 7), (3, 10), (5, 16)]);
    let p = GapSet::interval(int(0), int(5)).unwrap();
    let r = quotient_uc_scan(&lin, &p, &scales).unwrap();
    assert_eq!(r.m_bound, int(3));
    assert!(r.omega.iter().all(|o| o.1 == 0.0));
    let q = GapSet::interval(int(0), int(1)).unwrap();
    let xs: Vec<Rational> = (0..=64).map(|j| rat(j, 64)).collect();
    let sq = SampledFunction::from_exact(q.clone(), xs, "x^2", |x| x * x).unwrap();
    let r = quotient_uc_scan(&sq, &q, &scales).unwrap();
    assert!(r.m_bound <= int(2));
    for (d, w) in &r.omega {
        assert!(*w <= 2.0 * d + 1e-12);
    }
    assert!(matches!(quotient_uc_scan(&sq, &GapSet::interval(rat(1, 3), rat(1, 3)).unwrap(), &scales), Err(monsterlab::Error::TooFewSamples)));
}

#[test]
fn modulus_volterra_through_zero() {
    let q = GapSet::interval(rat(-1, 8), rat(1, 8)).unwrap();
    let xs: Vec<Rational> = (-32..=32).map(|j| rat(j, 256)).collect();
    let f = SampledFunction::from_ball_fn(q.clone(), xs, "volterra_h", |x| {
        volterra_h(monsterlab::evalcore::rational_to_f64(x))
    })
    .unwrap();
    let r = quotient_uc_scan(&f, &q, &[0.01, 0.001]).unwrap();
    // Quotients against 0 obey the squeeze |q(x, 0)| <= |x|; all are finite.
    for s in &f.samples {
        if !s.x.is_zero() {
            let q0 = (&s.value / &s.x).abs();
            assert!(q0 <= s.x.abs() + Rational::from_float(f.max_radius() * 1e4).unwrap());
        }
    }
    assert!(r.omega.iter().all(|o| o.1.is_finite()));
}

#[test]
fn pipeline_square() {
    let xs: Vec<Rational> = (0..=96).map(|j| rat(j, 96)).collect();
    let f = SampledFunction::from_exact(GapSet::interval(int(0), int(1)).unwrap(), xs, "x^2", |x| x * x).unwrap();
    let r = differentiable_restriction(&f, &int(0), &int(1), &Budget::default()).unwrap();
    assert!(matches!(r.branch, CarrierBranch::Monotone(_)));
    assert_eq!(r.q, GapSet::interval(int(0), int(1)).unwrap());
    assert!(!r.unrefined);
    for (x, d) in &r.derivatives {
        let x = monsterlab::evalcore::rational_to_f64(x);
        assert!((d - 2.0 * x).abs() <= 1.0 / 96.0 + 1e-12);
    }
}

#[test]
fn pipeline_zigzag() {
    // 80 teeth of height 1 on [0, 80]: no monotone run of 64 samples.
    let pts: Vec<(i64, i64)> = (0..=160).map(|j| (j, j % 2)).collect();
    let f = pl(&pts);
    let r = differentiable_restriction(&f, &int(0), &int(160), &Budget::default()).unwrap();
    match &r.branch {
        CarrierBranch::LevelSet { level } => assert_eq!(level, &rat(1, 2)),
        b => panic!("{b:?}"),
    }
    assert_eq!(r.carrier_points, 160);
    assert!(r.derivatives.iter().all(|d| d.1 == 0.0));
    assert!(!r.unrefined);
}

#[test]
fn pipeline_takagi() {
    let f = takagi_fn(3, 2048);
    let budget = Budget { m: 16, ..Budget::default() };
    let r = differentiable_restriction(&f, &int(0), &int(1), &budget).unwrap();
    assert!(r.modulus.points >= 2);
    match &r.branch {
        CarrierBranch::LevelSet { .. } | CarrierBranch::Constant { .. } => assert!(r.modulus.m_bound.is_zero()),
        CarrierBranch::Monotone(c) => assert!(r.modulus.m_bound <= c.l),
    }
    assert!(r.modulus.omega.iter().all(|o| o.1.is_finite()));
    assert!(GapSet::interval(int(0), int(1)).unwrap().contains_set(&r.q));
}

proptest! {
    #[test]
    fn rising_sun_endpoint_inequality(vals in proptest::collection::vec(-20i64..20, 2..14)) {
        let pts: Vec<(Rational, Rational)> = vals.iter().enumerate().map(|(i, v)| (int(i as i64), int(*v))).collect();
        let f = SampledFunction::piecewise_linear(pts.clone()).unwrap();
        let comps = rising_sun_points(&pts);
        for w in comps.windows(2) {
            prop_assert!(w[0].1 <= w[1].0);
        }
        for (c, d) in &comps {
            prop_assert!(c < d);
            prop_assert!(f.eval(c).unwrap() <= f.eval(d).unwrap());
        }
    }

    #[test]
    fn lipschitz_points_satisfy_bound(incs in proptest::collection::vec((1i64..5, 1i64..40), 2..20), k in 11i64..40) {
        let mut pts = vec![(int(0), int(0))];
        for (dx, dv) in incs {
            let (x, v) = pts.last().unwrap().clone();
            pts.push((x + int(dx), v + int(dv)));
        }
        let f = SampledFunction::piecewise_linear(pts.clone()).unwrap();
        let (a, b) = (pts[0].0.clone(), pts.last().unwrap().0.clone());
        let l = (&pts.last().unwrap().1 - &pts[0].1) / (&b - &a) * rat(k, 10);
        let cert = lipschitz_restriction(&f, &a, &b, &l).unwrap();
        prop_assert!(cert.ok());
        prop_assert!(interval_disjoint_sum(&cert.p.gaps, &cert.a_bar, &b).unwrap());
    }
}
