use std::f64::consts::PI;

use monsterlab::evalcore::*;
use monsterlab::monsters::*;
use monsterlab::perfectsets::{cantor_ternary, GapSet, Generator};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

#[test]
fn volterra_values() {
    assert_eq!(volterra_h(0.0), Ball::ZERO);
    assert!(volterra_h(1.0 / PI).contains(0.0) || volterra_h(1.0 / PI).mag() < 1e-15);
    assert!(volterra_h(2.0 / PI).contains(4.0 / (PI * PI)));
    assert_eq!(volterra_h_prime(0.0), Ball::ZERO);
    assert!((volterra_h_prime(1.0 / PI).center - 1.0).abs() < 1e-12);
    assert!((volterra_h_prime(2.0 / PI).center - 4.0 / PI).abs() < 1e-12);
    let q = diff_quotient(volterra_h, 2.0 / PI, 0.0).unwrap();
    assert!((q.center - 2.0 / PI).abs() <= q.radius + 1e-15);
}

#[test]
fn squeeze_at_zero() {
    let scales: Vec<f64> = (4..=30).map(|k| (2.0f64).powi(-k)).collect();
    for s in derivative_estimate(volterra_h, 0.0, &scales).unwrap() {
        assert!(s.symmetric.center.abs() <= s.scale + s.symmetric.radius);
        assert!(s.forward.center.abs() <= s.scale + s.forward.radius);
    }
    // |h(x)/x| <= |x| on a sweep, exact rational x via the |sin| <= 1 enclosure
    let mut st = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let x = uniform(&mut st, -2.0, 2.0);
        if x == 0.0 {
            continue;
        }
        let q = volterra_h(x) / Ball::exact(x);
        assert!(q.center.abs() <= x.abs() + q.radius);
    }
}

#[test]
fn calculus_examples() {
    let scales: Vec<f64> = (4..=30).map(|k| (2.0f64).powi(-k)).collect();
    let last = derivative_estimate(psi, 0.0, &scales).unwrap().pop().unwrap();
    assert!((last.symmetric.center - 1.0).abs() < 1e-8);
    for x in [-0.5, -1e-3, 1e-6, 0.25, 3.0] {
        let v = phi(x);
        assert!(v.lo() >= (Ball::exact(x).powi(4)).lo() * (1.0 - 1e-12));
        assert!(v.certainly_positive());
    }
    assert_eq!(phi(0.0), Ball::ZERO);
}

#[test]
fn eta_chain() {
    for j in 1..=10_000i64 {
        let xq = rat(j, 30_000);
        let x = rational_to_f64(&xq);
        assert!(eta_prime(x).mag() < 1.0, "x={x}");
        let three_x = int(3) * &xq;
        // 3x² + 2x + 1 <= 1 + 3x on (0, 1/3]
        assert!(int(3) * &xq * &xq + int(2) * &xq + int(1) <= int(1) + &three_x);
        // 1 + 3x < 1 + 3x + (3x)²/2 <= e^{3x}
        assert!(int(1) + &three_x < int(1) + &three_x + &three_x * &three_x / int(2));
    }
    for n in (1000..=10_000).step_by(250) {
        let x = 1.0 / (2.0 * PI * n as f64);
        let v = eta_prime(x);
        assert!((v.center + 1.0).abs() < 1e-3 && v.radius < 1e-9);
    }
}

#[test]
fn volterra_zero_and_sets() {
    let d = volterra_zero();
    assert!(d.radius < 1e-12 && d.center > 0.2 && d.center < 0.4);
    assert!(volterra_h_prime(d.center).contains(0.0) || volterra_h_prime(d.center).mag() < 1e-12);
    let e = cantor_ternary(2);
    assert_eq!(volterra_on_set(&e, 0.0).unwrap(), Ball::ZERO);
    assert_eq!(volterra_on_set(&e, 0.25).unwrap(), Ball::ZERO);
    assert_eq!(volterra_on_set(&e, 1.0).unwrap(), Ball::ZERO);
    let mid = volterra_on_set(&e, 0.5).unwrap();
    assert!(mid.overlaps(&volterra_h(d.center)));
    assert!(volterra_on_set(&e, 1.5).is_err());
    let single = discont_on_g(std::slice::from_ref(&e), 0.5).unwrap();
    assert_eq!(single.partial.center, mid.center);
    assert!(single.ball().contains_ball(&mid));
    // x in the gap of E_0 only
    let e1 = GapSet::new(int(0), int(1), vec![(rat(1, 9), rat(2, 9))], Generator::Explicit).unwrap();
    let two = discont_on_g(&[e.clone(), e1], 0.5).unwrap();
    assert!(two.partial.overlaps(&mid));
    assert!(two.tail > 0.0 && two.tail < 0.1);
    let zero = discont_on_g(&[e.clone(), e.clone()], 0.0).unwrap();
    assert_eq!(zero.partial.center, 0.0);
}

#[test]
fn pompeiu_examples() {
    let one = PompeiuSpec::finite(rat(1, 2), vec![int(0)]).unwrap();
    assert!(pompeiu_g(&one, 8.0).contains(1.0));
    assert!((pompeiu_g_prime_lower(&one, 1.0, 1) - 1.0 / 6.0).abs() < 1e-15);
    assert!(pompeiu_g_prime_lower(&one, 1.0, 1) <= 1.0 / 6.0);
    assert_eq!(pompeiu_g_prime_lower(&one, 0.0, 1), f64::INFINITY);
    let p = PompeiuSpec::standard();
    let q = diagonal_enumeration(11);
    assert_eq!(q, vec![int(0), int(1), int(-1), int(2), int(-2), rat(1, 2), rat(-1, 2), int(3), int(-3), rat(1, 3), rat(-1, 3)]);
    for (i, qi) in diagonal_enumeration(500).iter().enumerate() {
        assert!(num_traits::Signed::abs(qi) <= int(i as i64 + 1));
    }
    // g'(q_j) is infinite for every enumerated point
    assert_eq!(pompeiu_g_prime_lower(&p, 0.5, 10), f64::INFINITY);
    let mut prev = 0.0;
    for terms in 1..40 {
        let v = pompeiu_g_prime_lower(&p, 0.3, terms);
        assert!(v >= prev);
        prev = v;
    }
    let y0 = pompeiu_g(&p, 0.0);
    let h = pompeiu_h(&p, y0.center, 1e-12).unwrap();
    assert!(h.certified && h.lo <= 0.0 && 0.0 <= h.hi && h.x.abs() < 1e-12);
    let inv = invert_monotone(|x| pompeiu_g(&p, x), y0.center, (-1.0, 1.0), 1e-12).unwrap();
    assert!(inv.x.abs() < 1e-12);
    assert!(PompeiuSpec::finite(rat(1, 2), vec![int(3)]).is_err());
    assert!(PompeiuSpec::new(rat(3, 2), 5).is_err());
}

#[test]
fn pompeiu_tail_dominates() {
    // The closed-form tail is at least a long explicit partial sum of the bound.
    let p = PompeiuSpec::new(rat(1, 2), 20).unwrap();
    for x in [0.0f64, 1.5, -7.0] {
        let explicit: f64 = (21..400).map(|i: i32| 0.5f64.powi(i) * (x.abs() + i as f64 + 1.0)).sum();
        assert!(p.tail(x.abs()) >= explicit);
        assert!(p.tail(x.abs()) <= explicit * (1.0 + 1e-9) + 1e-300);
    }
}

#[test]
fn pompeiu_monotone_pairs() {
    let p = PompeiuSpec::new(rat(1, 2), 60).unwrap();
    let mut st = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let a = uniform(&mut st, -20.0, 20.0);
        let b = uniform(&mut st, -20.0, 20.0);
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        if y - x < 1e-9 {
            continue;
        }
        assert!(pompeiu_g(&p, x).certainly_lt(&pompeiu_g(&p, y)), "{x} {y}");
    }
}

#[test]
fn pompeiu_inverse_flattens_at_anchor() {
    let p = PompeiuSpec::standard();
    let y = pompeiu_g(&p, p.q_ball(2).center).center;
    let mut last = f64::INFINITY;
    for k in [4, 8, 12, 16] {
        let s = (2.0f64).powi(-k);
        let q = diff_quotient(|z| pompeiu_h(&p, z, 0.0).unwrap().ball(), y + s, y).unwrap();
        assert!(q.center < last);
        last = q.center;
    }
    assert!(last < 1e-6);
    let xs: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.1).collect();
    let hs: Vec<f64> = xs.iter().map(|&y| pompeiu_h(&p, y, 0.0).unwrap().x).collect();
    assert!(hs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn monster_signs() {
    let p = PompeiuSpec::standard();
    assert_eq!(monster_eval(&p, 0.0, 0.7).unwrap(), Ball::ZERO);
    let spec = search_monster(&p, &MonsterSearch::default()).unwrap();
    assert!(spec.certs.len() >= 8);
    for c in &spec.certs {
        let pos = monster_quotients(&p, spec.t, spec.t + c.d, 12..=26).unwrap();
        let neg = monster_quotients(&p, spec.t, c.d, 12..=26).unwrap();
        assert!(signs_hold(&pos, true) && signs_hold(&neg, false));
        assert!(c.g_prime_lower > 1e3);
    }
}

#[test]
fn takagi_values() {
    let s = TakagiSpec { depth: 4 };
    assert!(takagi(s, &int(0)).partial.is_zero());
    assert_eq!(takagi(s, &rat(1, 16)).partial, rat(5, 16));
    assert_eq!(lattice_distance(&rat(1, 16), 1), rat(1, 16));
    assert_eq!(lattice_distance(&rat(-3, 10), 0), rat(3, 10));
    for n in 1..=4u32 {
        for k in 0..(8i64.pow(n)) {
            let q = anchor_quotient(&BigInt::from(k), n);
            assert!(q * int(3) >= int(2) * Rational::from_integer(num_traits::pow(BigInt::from(4), n as usize - 1)));
        }
    }
    assert!(anchor_quotient(&BigInt::from(0), 0).is_zero());
}

// Rational oracle: the endpoint choice is rechecked through the exact partial sums.
#[test]
fn takagi_sweep_matches_rational_oracle() {
    assert!(sweep_takagi_anchor(3).ok());
    let d = 3u32;
    let spec = TakagiSpec { depth: d };
    let scale = 8i64.pow(d);
    for j in 0..=scale {
        let x = rat(j, scale);
        let fx = takagi(spec, &x).partial;
        for n in 1..=d {
            let cell = 8i64.pow(d - n);
            let a = (j / cell).min(8i64.pow(n) - 1) * cell;
            let mut best = Rational::zero();
            for y in [a, a + cell] {
                if y != j {
                    let yq = rat(y, scale);
                    let q = num_traits::Signed::abs(&((&fx - takagi(spec, &yq).partial) / (&x - &yq)));
                    best = best.max(q);
                }
            }
            let bound = rat(2, 3) * Rational::from_integer(num_traits::pow(BigInt::from(4), n as usize - 1));
            assert!(best >= bound);
        }
    }
}

#[test]
fn weierstrass_values() {
    let w0 = weierstrass_w(0.0, 40);
    assert!(w0.contains(2.0));
    let w1 = weierstrass_w(1.0, 40);
    assert!(w1.contains(-2.0));
    let mut st = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let x = uniform(&mut st, -3.0, 3.0);
        let w = weierstrass_w(x, 30);
        assert!(w.center.abs() <= 2.0 + w.radius);
    }
}

#[test]
fn andy_demo() {
    assert!(andy_gamma(1.0 / PI).contains(-1.0));
    assert_eq!(andy_gamma(0.0), Ball::ZERO);
    let a = AndySpec::new(PompeiuSpec::standard()).unwrap();
    for x in [-0.9, -0.2, 0.3, 0.8] {
        let v = andy_phi(&a, x).unwrap();
        assert!(v.lo() >= -1e-300 && v.hi() <= 1.0);
    }
    let x0 = a.zero_points(1)[0];
    assert!(x0.abs() < 1.0);
    let osc = andy_oscillation(&a, x0, &[1e-1, 1e-2, 1e-3], 150).unwrap();
    assert!(osc.iter().all(|&o| o >= 1.0), "{osc:?}");
}

#[test]
fn inverse_across_a_jump() {
    // f jumps over y between two adjacent floats; the bracket itself encloses the preimage.
    let a = 0.3f64;
    let f = |x: f64| Ball::exact(if x <= a { x } else { x + 1.0 });
    let inv = invert_monotone(f, 0.8, (0.0, 1.0), 0.0).unwrap();
    assert!(inv.certified);
    assert_eq!((inv.lo, inv.hi), (a, a.next_up()));
    let p = PompeiuSpec::standard();
    let v = monster_eval(&p, 0.25, 0.5625).unwrap();
    assert!(v.is_finite());
}
