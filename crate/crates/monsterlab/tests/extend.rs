use monsterlab::evalcore::{int, rat, rational_to_f64, rpow, Ball, RatPoly, Rational};
use monsterlab::extend::*;
use monsterlab::monsters::{monster_eval, PompeiuSpec};
use monsterlab::perfectsets::{cantor_ternary, hat, GapSet, Generator};
use monsterlab::Error;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn gapset(lo: Rational, hi: Rational, gaps: Vec<(Rational, Rational)>) -> GapSet {
    GapSet::new(lo, hi, gaps, Generator::Explicit).unwrap()
}

fn jet(x: Rational, d: &[Rational]) -> Jet {
    Jet::new(x, d.to_vec())
}

/// Carrier in `[0, 8]` cut at `cuts/8` (sorted, distinct, inside `1..64`), with jets `(v, d)` at every endpoint.
fn random_fn(cuts: &[i64], vals: &[(i64, i64)]) -> SetFunction {
    let gaps: Vec<(Rational, Rational)> = cuts.chunks(2).map(|c| (rat(c[0], 8), rat(c[1], 8))).collect();
    let carrier = gapset(int(0), int(8), gaps);
    let jets = carrier
        .endpoints()
        .into_iter()
        .zip(vals.iter().cycle())
        .map(|(x, &(v, d))| jet(x, &[int(v), rat(d, 2)]))
        .collect();
    SetFunction::new(carrier, jets).unwrap()
}

fn cuts_strategy() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=4).prop_flat_map(|g| proptest::sample::subsequence((1..64i64).collect::<Vec<_>>(), 2 * g))
}

#[test]
fn taylor_poly_examples() {
    assert_eq!(taylor_poly(&jet(int(0), &[int(1), int(0), int(0)]), &int(5)), int(1));
    assert_eq!(taylor_poly(&jet(int(1), &[int(1), int(2), int(2)]), &int(2)), int(4));
    let j = jet(rat(1, 3), &[rat(7, 5), int(-3), int(4)]);
    assert_eq!(taylor_poly(&j, &rat(1, 3)), rat(7, 5));
}

#[test]
fn q_fn_examples() {
    let c = cantor_ternary(3);
    let f = SetFunction::from_poly(c.clone(), &RatPoly::from_ints(&[1, -2, 3]), 2, &[]).unwrap();
    let pts = c.endpoints();
    for a in &pts {
        assert!(q_fn(&f, a, a).unwrap().is_zero());
        for b in &pts {
            assert!(q_fn(&f, a, b).unwrap().is_zero(), "degree 2 data");
        }
    }
    let g = SetFunction::from_poly(c, &RatPoly::from_ints(&[0, 1, 0, 1]), 1, &[]).unwrap();
    for a in &pts {
        for b in pts.iter().filter(|b| *b != a) {
            let (fa, fb) = (g.value(a).unwrap(), g.value(b).unwrap());
            let d = &g.jet(a).unwrap().derivs[1];
            assert_eq!(q_fn(&g, a, b).unwrap(), (fb - fa) / (b - a) - d);
        }
    }
    assert!(matches!(q_fn(&g, &rat(1, 2), &int(0)), Err(Error::MissingJet(_))));
}

#[test]
fn linear_interpolate_single_gap() {
    let c = gapset(int(0), int(1), vec![(int(0), int(1))]);
    let f = SetFunction::new(c, vec![jet(int(0), &[int(0)]), jet(int(1), &[int(2)])]).unwrap();
    let bar = linear_interpolate(&f).unwrap();
    assert_eq!(bar.eval_exact(&rat(1, 2)), Some(int(1)));
    assert_eq!(bar.eval_exact(&int(1)), Some(int(2)));
}

#[test]
fn missing_endpoint_jet_is_rejected() {
    let c = gapset(int(0), int(3), vec![(int(1), int(2))]);
    let r = SetFunction::new(c, vec![jet(int(0), &[int(0)]), jet(int(1), &[int(0)]), jet(int(3), &[int(0)])]);
    assert!(matches!(r, Err(Error::MissingJet(_))));
}

#[test]
fn hat_f_examples() {
    let c = gapset(int(0), int(3), vec![(int(0), int(3))]);
    let f = SetFunction::new(c, vec![jet(int(0), &[int(0), int(1)]), jet(int(3), &[int(3), int(1)])]).unwrap();
    let h = hat_f(&f).unwrap();
    assert_eq!(h.carrier, hat(&f.carrier));
    for x in [int(1), int(2)] {
        assert_eq!(h.jet(&x).unwrap().derivs, vec![x.clone(), int(1)]);
    }

    let k = SetFunction::from_poly(cantor_ternary(2), &RatPoly::from_ints(&[5]), 1, &[]).unwrap();
    let hk = hat_f(&k).unwrap();
    assert!(hk.jets.iter().all(|j| j.derivs == vec![int(5), int(0)]));
}

#[test]
fn staircase_hat_derivative_jumps() {
    let s = staircase(6, &int(1), &int(1)).unwrap();
    let h = hat_f(&s).unwrap();
    // Middle-third derivatives carry the secant slopes while f' = 0 on the carrier.
    for (k, (a, b)) in s.carrier.gaps.iter().enumerate() {
        let third = (b - a) / int(3);
        let slope = s.gap_slope(k).unwrap();
        assert_eq!(h.jet(&(a + &third)).unwrap().derivs[1], slope);
        if k + 1 < s.carrier.gaps.len() {
            assert!(!slope.is_zero());
        }
    }
    assert!(!c1_criterion(&s, &rat(1, 4)).unwrap().ok);
}

#[test]
fn jarnik_linear_data_has_no_spikes() {
    let f = SetFunction::from_poly(cantor_ternary(3), &RatPoly::from_ints(&[2, -3]), 1, &[]).unwrap();
    let ext = jarnik_extend(&f).unwrap();
    let bar = linear_interpolate(&f).unwrap();
    assert!(ext.adjustors.iter().all(|a| a.h_a.is_zero() && a.h_b.is_zero()));
    for i in 0..=270 {
        let x = rat(i, 270);
        assert!(ext.g(&x).is_zero());
        assert_eq!(ext.eval.eval_exact(&x), bar.eval_exact(&x));
    }
}

#[test]
fn jarnik_single_gap() {
    let c = gapset(int(0), int(1), vec![(int(0), int(1))]);
    let f = SetFunction::new(c, vec![jet(int(0), &[int(0), int(1)]), jet(int(1), &[int(0), int(-1)])]).unwrap();
    let ext = jarnik_extend(&f).unwrap();
    assert_eq!(ext.adjustors.len(), 2);
    let (l, r) = (&ext.adjustors[0], &ext.adjustors[1]);
    assert_eq!((&l.h_a, &r.h_b), (&int(1), &int(-1)));
    assert!(l.h_b.is_zero() && r.h_a.is_zero());
    assert_eq!(&l.slope + l.d_plus_g_a(), int(1));
    assert_eq!(&r.slope + r.d_minus_g_b(), int(-1));
    // On the first spike piece F(δ) = δ - δ²/(2w).
    let (wa, wb) = (&l.s - &l.a, &r.b - &r.t);
    for k in 1..12 {
        let d = &wa / int(1 << k);
        let q = ext.eval.eval_exact(&d).unwrap() / &d;
        assert_eq!(int(1) - q, &d / (int(2) * &wa));
        let d = &wb / int(1 << k);
        let q = ext.eval.eval_exact(&(int(1) - &d)).unwrap() / -&d;
        assert_eq!(q + int(1), &d / (int(2) * &wb));
    }
    assert!(ext.certify().ok());
    assert!(ext.eval.max_degree() <= 3);
}

#[test]
fn jarnik_on_cantor_meets_schedule() {
    let f = SetFunction::from_poly(cantor_ternary(3), &RatPoly::from_ints(&[0, 1, 0, 1]), 1, &[]).unwrap();
    let ext = jarnik_extend(&f).unwrap();
    let cert = ext.certify();
    assert!(cert.ok(), "{:?}", cert.witnesses);
    let sched = fdiff_schedule(&ext, 20, 10);
    assert!(sched.ok());
    assert_eq!(sched.rows.len(), 2 * f.jets.len());
}

#[test]
fn schedule_catches_oversized_adjustors() {
    let f = SetFunction::from_poly(cantor_ternary(3), &RatPoly::from_ints(&[0, 1, 0, 1]), 1, &[]).unwrap();
    let mut ext = jarnik_extend(&f).unwrap();
    let good = fdiff_schedule(&ext, 20, 10);
    assert!(good.rows.iter().map(|r| r.admitted).sum::<u32>() > 0);
    // F = f̄ + c·g with the interpolation f̄ unchanged.
    let c = int(3i64.pow(12));
    for ad in &mut ext.adjustors {
        for (u, v, g) in &mut ad.g_pieces {
            let piece = ext.eval.pieces.iter_mut().find(|p| &p.lo == u && &p.hi == v).unwrap();
            let PieceKind::Poly(p) = &piece.kind else { panic!("gap piece") };
            piece.kind = PieceKind::Poly(p.add(&g.scale(&(&c - int(1)))));
            *g = g.scale(&c);
        }
    }
    // The spikes sit next to the gap ends, so the rows running into a gap see them.
    let bad = fdiff_schedule(&ext, 20, 10);
    assert!(!bad.ok());
    assert!(bad.rows.iter().any(|r| r.k_m.iter().any(Option::is_none)));
}

#[test]
fn jarnik_needs_derivatives() {
    let f = SetFunction::from_poly(cantor_ternary(1), &RatPoly::from_ints(&[0, 1]), 0, &[]).unwrap();
    assert!(matches!(jarnik_extend(&f), Err(Error::MissingJet(_))));
}

#[test]
fn c1_examples() {
    let c = cantor_ternary(6);
    let k = SetFunction::from_poly(c.clone(), &RatPoly::from_ints(&[3]), 1, &[]).unwrap();
    let r = c1_criterion(&k, &rat(1, 100)).unwrap();
    assert!(r.ok && r.omega.is_zero());
    let sq = SetFunction::from_poly(c, &RatPoly::from_ints(&[0, 0, 1]), 1, &[]).unwrap();
    assert!(c1_criterion(&sq, &rat(1, 10)).unwrap().ok);
}

#[test]
fn c1_staircase_families() {
    let n = 12;
    for lambda in [rat(1, 2), int(1), int(3)] {
        let bad = c1_criterion(&staircase(n, &lambda, &int(1)).unwrap(), &rat(1, 4)).unwrap();
        assert!(!bad.ok);
        // The witness sits next to the accumulation point 0.
        assert!(bad.witness.unwrap() <= rpow(&int(2), -(n as i32) + 2));
        let good = c1_criterion(&staircase(n, &lambda, &rat(1, 2)).unwrap(), &rat(1, 4)).unwrap();
        assert!(good.ok, "lambda {lambda} omega {}", good.omega);
    }
}

#[test]
fn psi_is_a_smooth_step() {
    assert_eq!(psi_exact(&rat(1, 4)), Some(int(0)));
    assert_eq!(psi_exact(&rat(1, 3)), Some(int(0)));
    assert_eq!(psi_exact(&rat(2, 3)), Some(int(1)));
    assert_eq!(psi_exact(&rat(1, 2)), None);
    assert!(psi(Ball::exact(0.5)).contains(0.5));
    let mut prev = 0.0;
    for i in 0..=300 {
        let t = i as f64 / 300.0;
        let v = psi(Ball::exact(t));
        let w = psi(Ball::exact(1.0 - t));
        assert!((v + w).contains(1.0) || ((v + w).mag() - 1.0).abs() < 1e-12);
        assert!(v.hi() >= prev - 1e-15);
        prev = v.lo();
    }
    // One-sided derivatives at the flat ends vanish faster than any power.
    for k in 7..14 {
        let h = libm::ldexp(1.0, -k);
        assert!(psi(Ball::exact(1.0 / 3.0 + h)).hi() / h < 1e-6);
        assert!((1.0 - psi(Ball::exact(2.0 / 3.0 - h)).lo()) / h < 1e-6);
    }
}

#[test]
fn whitney_two_point_is_psi() {
    let c = gapset(int(0), int(1), vec![(int(0), int(1))]);
    let f = SetFunction::new(c, vec![jet(int(0), &[int(0), int(0)]), jet(int(1), &[int(1), int(0)])]).unwrap();
    let ext = whitney_extend(&f).unwrap();
    assert_eq!(ext.eval_exact(&rat(1, 5)), Some(int(0)));
    assert_eq!(ext.eval_exact(&rat(4, 5)), Some(int(1)));
    for i in 1..100 {
        let x = i as f64 / 100.0;
        assert!(ext.eval(x).overlaps(&psi(Ball::exact(x))));
    }
}

#[test]
fn whitney_smooth_sources() {
    let c = cantor_ternary(5);
    let scales: Vec<Rational> = (1..=5).map(|k| rpow(&int(3), -k)).collect();
    for n in [1usize, 2] {
        for p in [RatPoly::from_ints(&[0, 0, 1]), RatPoly::from_ints(&[0, 0, 0, 1])] {
            let f = SetFunction::from_poly(c.clone(), &p, n, &[]).unwrap();
            let rep = whitney_check(&f, &rat(1, 10), &scales).unwrap();
            assert!(rep.passed && !rep.divergent);
            let probe = jet_probe(&whitney_extend(&f).unwrap(), &f, 1e-6);
            assert!(probe.ok(), "max err {}", probe.max_err);
        }
    }
    // Polynomial of degree ≤ n: every q vanishes.
    let f = SetFunction::from_poly(c, &RatPoly::from_ints(&[1, 1, 1]), 2, &[]).unwrap();
    let rep = whitney_check(&f, &rat(1, 1000), &scales).unwrap();
    assert!(rep.rows.iter().all(|r| r.band_max.iter().flatten().all(|m| m.is_zero())));
}

#[test]
fn whitney_check_rejects_bad_scales() {
    let f = SetFunction::from_poly(cantor_ternary(2), &RatPoly::from_ints(&[0, 1]), 1, &[]).unwrap();
    assert!(matches!(whitney_check(&f, &rat(1, 10), &[rat(1, 9), rat(1, 3)]), Err(Error::BadScales)));
    assert!(matches!(whitney_check(&f, &rat(1, 10), &[int(0)]), Err(Error::BadScales)));
}

#[test]
fn ex111_values() {
    let ex = ex111_build(6).unwrap();
    assert_eq!(ex.f.eval_exact(&int(0)), Some(int(0)));
    for (p, q) in &ex.set.gaps {
        let mut m = 0;
        let mut len = q - p;
        while len < int(1) {
            len *= int(3);
            m += 1;
        }
        let mid = (p + q) / int(2);
        assert_eq!(ex.f0.eval_exact(&mid), Some(rpow(&int(2), -(m + 1))));
        let mass = ex.f.eval_exact(q).unwrap() - ex.f.eval_exact(p).unwrap();
        assert_eq!(mass, rpow(&int(6), -m) / int(4));
    }
    assert!(ex111_build(17).is_err());
}

#[test]
fn ex111_one_against_rationals() {
    // Rational route over all endpoint pairs of the depth-5 build, checked against the integer sweep.
    let depth = 5;
    let ex = ex111_build(depth).unwrap();
    let pts = ex.set.endpoints();
    let vals: Vec<Rational> = pts.iter().map(|x| ex.f.eval_exact(x).unwrap()).collect();
    let mut cases = 0u64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = &pts[j] - &pts[i];
            let lhs = (&vals[j] - &vals[i]).abs() / (&d * &d);
            for n in 1..=depth as i32 {
                if d < rpow(&int(3), -n) {
                    cases += 1;
                    assert!(lhs > rpow(&rat(3, 2), n) / int(36), "pair {i},{j} n {n}");
                }
            }
        }
    }
    let rep = ex111_one_check(depth);
    assert!(rep.ok());
    assert!(cases > 0 && rep.cases >= cases);
}

#[test]
fn ex111_jets_diverge() {
    let e = ex111_set_function(6).unwrap();
    let scales: Vec<Rational> = (1..=5).map(|k| rpow(&int(3), -k)).collect();
    let rep = whitney_check(&e, &rat(1, 100), &scales).unwrap();
    assert!(rep.divergent && !rep.passed);
    assert!(ex111_one_check(8).ok());
}

#[test]
fn envelope_bounds() {
    let (a, b) = (rat(1, 4), rat(3, 4));
    assert_eq!(envelope(&a, &b, 0.25), Ball::ZERO);
    assert_eq!(envelope(&a, &b, 0.8), Ball::ZERO);
    for i in 1..100 {
        let x = 0.25 + 0.5 * i as f64 / 100.0;
        let e = envelope(&a, &b, x);
        assert!(e.lo() >= 0.0 && e.hi() <= 0.5 / 16.0 + 1e-12);
        // Squeeze at the endpoint: e(x)/|x - a| ≤ (x - a)/(b - a)... → 0.
        assert!(e.hi() / (x - 0.25) <= (x - 0.25) * 4.0 + 1e-12);
    }
}

#[test]
fn twisted_single_gap_with_monster() {
    let c = gapset(int(0), int(1), vec![(rat(1, 4), rat(3, 4))]);
    let f = SetFunction::from_poly(c, &RatPoly::from_ints(&[0, 1]), 1, &[]).unwrap();
    let spec = PompeiuSpec::standard();
    let mon = |u: f64| monster_eval(&spec, 0.25, u);
    let src = TwistSource::scan(&mon, 0.0, 1.0 / 4096.0, 4096).unwrap();
    let tw = twisted_extend(&f, &src, &TwistSettings::default()).unwrap();
    assert!(tw.ok(), "{:?}", tw.gaps[0].monotone_cells);
    assert_eq!(tw.gaps[0].windows.len(), 2 * 64);
    for j in &f.jets {
        let x = rational_to_f64(&j.point);
        assert_eq!(tw.twist(x, &mon), Ball::ZERO);
        assert!(tw.eval(x, &mon).contains_rational(j.value()));
    }
    for w in tw.gaps[0].windows.iter().step_by(7) {
        for s in [0.2, 0.5, 0.9] {
            let x = w.lo + s * (w.hi - w.lo);
            let e = envelope(&rat(1, 4), &rat(3, 4), x);
            assert!(tw.twist(x, &mon).mag() <= e.hi() * (1.0 + 1e-12));
        }
    }
}

#[test]
fn twisted_with_smooth_oscillator() {
    let c = gapset(int(0), int(2), vec![(rat(1, 8), rat(7, 8)), (int(1), rat(3, 2))]);
    let f = SetFunction::from_poly(c, &RatPoly::from_ints(&[0, 2, 0, 1]), 1, &[]).unwrap();
    let sine = |u: f64| Ok(Ball::exact(u).sin());
    let src = TwistSource::scan(&sine, 0.0, 1.0 / 64.0, 1000).unwrap();
    let tw = twisted_extend(&f, &src, &TwistSettings { resolution: 5, retries: 2 }).unwrap();
    assert!(tw.ok());
    // Difference quotients of F̂ and F at a gap endpoint agree within e(x)/|x - a|.
    let a = 0.125;
    for k in 6..30 {
        let x = a + libm::ldexp(1.0, -k);
        let diff = tw.twist(x, &sine).mag() / (x - a);
        assert!(diff <= envelope(&rat(1, 8), &rat(7, 8), x).hi() / (x - a) + 1e-300);
        assert!(diff <= 4.0 * (x - a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn taylor_routes_agree(x0 in -20i64..20, d in proptest::collection::vec(-9i64..9, 1..5), x in -50i64..50) {
        let j = jet(rat(x0, 4), &d.iter().map(|&v| int(v)).collect::<Vec<_>>());
        prop_assert_eq!(taylor_poly(&j, &rat(x, 3)), j.taylor().eval(&rat(x, 3)));
    }

    #[test]
    fn linear_interpolate_sandwich(cuts in cuts_strategy(), vals in proptest::collection::vec((-6i64..6, -4i64..4), 4..12), num in 1i64..8) {
        let f = random_fn(&cuts, &vals);
        let bar = linear_interpolate(&f).unwrap();
        for (a, b) in &f.carrier.gaps {
            let y = a + (b - a) * rat(num, 8);
            let fy = bar.eval_exact(&y).unwrap();
            for j in f.jets.iter().filter(|j| &j.point < a || &j.point > b) {
                let x = &j.point;
                let qa = (f.value(a).unwrap() - j.value()) / (a - x);
                let qb = (f.value(b).unwrap() - j.value()) / (b - x);
                let q = (&fy - j.value()) / (&y - x);
                let (lo, hi) = if qa < qb { (qa, qb) } else { (qb, qa) };
                prop_assert!(lo <= q && q <= hi);
            }
        }
    }

    #[test]
    fn jarnik_random_carriers(cuts in cuts_strategy(), vals in proptest::collection::vec((-6i64..6, -4i64..4), 4..12)) {
        let f = random_fn(&cuts, &vals);
        let ext = jarnik_extend(&f).unwrap();
        let cert = ext.certify();
        prop_assert!(cert.ok(), "{:?}", cert.witnesses);
        prop_assert!(fdiff_schedule(&ext, 20, 10).ok());
        for j in &f.jets {
            prop_assert_eq!(ext.g(&j.point), Rational::zero());
        }
        for ad in &ext.adjustors {
            prop_assert!(ad.eps.is_positive() && ad.eps_sq() < ad.ell.clone() * &ad.ell);
            prop_assert!(&ad.s - &ad.a < ad.eps_sq() && &ad.b - &ad.t < ad.eps_sq());
        }
    }

    #[test]
    fn q_fn_order_one(cuts in cuts_strategy(), vals in proptest::collection::vec((-6i64..6, -4i64..4), 4..12)) {
        let f = random_fn(&cuts, &vals);
        for a in &f.jets {
            for b in &f.jets {
                let q = q_fn(&f, &a.point, &b.point).unwrap();
                if a.point == b.point {
                    prop_assert!(q.is_zero());
                } else {
                    let expect = (b.value() - a.value()) / (&b.point - &a.point) - &a.derivs[1];
                    prop_assert_eq!(q, expect);
                }
            }
        }
    }

    #[test]
    fn staircase_discrimination(lambda in 1i64..8, den in 2i64..5) {
        let lam = rat(lambda, 2);
        let bad = c1_criterion(&staircase(12, &lam, &Rational::one()).unwrap(), &rat(1, 8)).unwrap();
        prop_assert!(!bad.ok);
        let good = c1_criterion(&staircase(12, &lam, &rat(1, den)).unwrap(), &rat(1, 8)).unwrap();
        prop_assert!(good.ok);
    }
}
