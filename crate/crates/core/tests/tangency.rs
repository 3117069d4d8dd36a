use expansive_core::tangency::{
    local_ball_cardinality_bound, sturm_root_count, tangency_order, JetPair, LocalBound, Polynomial, TangencyOrder,
};
use expansive_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly(c: &[f64]) -> Polynomial {
    Polynomial::new(c.to_vec()).unwrap()
}

fn jets(s: &[f64], u: &[f64], r: usize) -> JetPair {
    JetPair::new(poly(s), poly(u), r, 1.0).unwrap()
}

/// Sign changes of `p` on a uniform grid, exact zeros counted once.
fn sign_scan(p: &Polynomial, a: f64, b: f64, step: f64) -> usize {
    let n = ((b - a) / step).round() as usize;
    let mut count = 0;
    let mut last = 0.0f64;
    for i in 0..=n {
        let v = p.eval(a + (b - a) * i as f64 / n as f64);
        if v == 0.0 {
            count += 1;
            last = 0.0;
        } else {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// Random polynomial of degree ≤ 8 with separated real roots inside
/// (−1.9, 1.9) and some root-free quadratic factors.
fn random_poly(rng: &mut ChaCha8Rng) -> (Polynomial, usize) {
    let quads = rng.random_range(0..=2usize);
    let max_real = 8 - 2 * quads;
    let k = rng.random_range(0..=max_real);
    let mut roots: Vec<f64> = Vec::new();
    while roots.len() < k {
        let r = rng.random_range(-1.9..1.9);
        if roots.iter().all(|q: &f64| (q - r).abs() > 0.01) {
            roots.push(r);
        }
    }
    let lead = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let mut p = Polynomial::from_roots(lead, &roots).unwrap();
    for _ in 0..quads {
        let c = rng.random_range(-2.0..2.0);
        let s: f64 = rng.random_range(0.1..1.0);
        p = &p * &poly(&[c * c + s * s, -2.0 * c, 1.0]);
    }
    (p, k)
}

#[test]
fn sturm_examples() {
    assert_eq!(sturm_root_count(&poly(&[-1.0, 0.0, 1.0]), -2.0, 2.0).unwrap(), 2);
    assert_eq!(sturm_root_count(&poly(&[0.0, 0.0, 1.0]), -1.0, 1.0).unwrap(), 1);
    assert_eq!(sturm_root_count(&poly(&[1.0, 0.0, 1.0]), -5.0, 5.0).unwrap(), 0);
    assert_eq!(sturm_root_count(&poly(&[3.0]), -5.0, 5.0).unwrap(), 0);
}

#[test]
fn endpoint_roots_are_counted_once() {
    let p = poly(&[-1.0, 0.0, 1.0]);
    assert_eq!(sturm_root_count(&p, -1.0, 1.0).unwrap(), 2);
    assert_eq!(sturm_root_count(&p, 1.0, 3.0).unwrap(), 1);
    assert_eq!(sturm_root_count(&p, 1.0, 1.0).unwrap(), 1);
    assert_eq!(sturm_root_count(&p, 0.0, 0.0).unwrap(), 0);
    // (x − 1)³ (x + 0.5)
    let q = Polynomial::from_roots(1.0, &[1.0, 1.0, 1.0, -0.5]).unwrap();
    assert_eq!(sturm_root_count(&q, -0.5, 1.0).unwrap(), 2);
    assert_eq!(sturm_root_count(&q, 0.0, 1.0).unwrap(), 1);
}

#[test]
fn sturm_errors() {
    assert!(matches!(sturm_root_count(&Polynomial::zero(), 0.0, 1.0), Err(Error::Domain(_))));
    assert!(matches!(sturm_root_count(&poly(&[1.0, 1.0]), 1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(sturm_root_count(&poly(&[1.0, 1.0]), f64::NAN, 0.0), Err(Error::Domain(_))));
    assert!(Polynomial::new(vec![1.0, f64::INFINITY]).is_err());
}

#[test]
fn sturm_matches_sign_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let (p, k) = random_poly(&mut rng);
        let exact = sturm_root_count(&p, -2.0, 2.0).unwrap();
        assert_eq!(exact, k, "{:?}", p.coefficients());
        assert_eq!(exact, sign_scan(&p, -2.0, 2.0, 1e-4), "{:?}", p.coefficients());
    }
}

#[test]
fn rolle_between_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let n = rng.random_range(1..=8usize);
        let roots: Vec<f64> = (0..n)
            .map(|_| {
                // a coarse lattice makes repeated roots common
                (rng.random_range(-16..=16) as f64) / 8.0
            })
            .collect();
        let p = Polynomial::from_roots(1.0, &roots).unwrap();
        let a = rng.random_range(-2.5..0.0);
        let b = rng.random_range(0.0..2.5);
        let m = sturm_root_count(&p, a, b).unwrap();
        let dp = p.derivative();
        let md = if dp.is_zero() { 0 } else { sturm_root_count(&dp, a, b).unwrap() };
        assert!(md + 1 >= m, "p has {m} roots, p' has {md} on [{a}, {b}]: {roots:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sturm_ignores_positive_scaling(seed in any::<u64>(), c in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, _) = random_poly(&mut rng);
        prop_assert_eq!(
            sturm_root_count(&p, -2.0, 2.0).unwrap(),
            sturm_root_count(&p.scale(c), -2.0, 2.0).unwrap()
        );
    }

    #[test]
    fn order_is_symmetric(s in prop::collection::vec(-2i32..=2, 1..6), u in prop::collection::vec(-2i32..=2, 1..6), r in 1usize..6) {
        let mut s: Vec<f64> = s.into_iter().map(f64::from).collect();
        let mut u: Vec<f64> = u.into_iter().map(f64::from).collect();
        s.insert(0, 0.0);
        u.insert(0, 0.0);
        prop_assert_eq!(tangency_order(&jets(&s, &u, r)).unwrap(), tangency_order(&jets(&u, &s, r)).unwrap());
    }

    #[test]
    fn shrinking_windows_respect_the_order(k in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let deg = k + rng.random_range(0..=3usize);
        let mut diff = vec![0.0; deg + 1];
        diff[k] = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        for c in diff.iter_mut().skip(k + 1) {
            *c = rng.random_range(-2.0..2.0);
        }
        let stable: Vec<f64> = (0..=deg).map(|i| if i == 0 { 0.0 } else { rng.random_range(-1.0..1.0) }).collect();
        let unstable: Vec<f64> = stable.iter().zip(&diff).map(|(a, b)| a + b).collect();
        let mut jp = JetPair::new(poly(&stable), poly(&unstable), deg, 1.0).unwrap();
        prop_assume!(tangency_order(&jp).unwrap() == TangencyOrder::Order(k));
        let mut last = usize::MAX;
        for _ in 0..=5 {
            last = local_ball_cardinality_bound(&jp).unwrap().roots;
            jp.half_window /= 2.0;
        }
        prop_assert!(last <= k);
    }
}

#[test]
fn tangency_examples() {
    assert_eq!(tangency_order(&jets(&[0.0], &[0.0, 0.0, 1.0], 3)).unwrap(), TangencyOrder::Order(2));
    assert_eq!(tangency_order(&jets(&[0.0, 1.0], &[0.0, 1.0, 0.0, 1.0], 2)).unwrap(), TangencyOrder::ExceedsR);
    assert_eq!(tangency_order(&jets(&[0.0, 1.0], &[0.0, 1.0, 0.0, 1.0], 3)).unwrap(), TangencyOrder::Order(3));
    assert_eq!(tangency_order(&jets(&[], &[0.0, 3.0], 1)).unwrap(), TangencyOrder::Order(1));
    assert!(matches!(tangency_order(&jets(&[1.0], &[0.0, 1.0], 2)), Err(Error::Precondition(_))));
    assert!(JetPair::new(poly(&[]), poly(&[]), 0, 1.0).is_err());
    assert!(JetPair::new(poly(&[]), poly(&[]), 1, 0.0).is_err());
}

#[test]
fn local_bounds() {
    let transverse = local_ball_cardinality_bound(&jets(&[0.0], &[0.0, 3.0], 2)).unwrap();
    assert_eq!(transverse, LocalBound { bound: 1, roots: 1 });
    let quadratic = local_ball_cardinality_bound(&jets(&[0.0], &[0.0, 0.0, 1.0], 2)).unwrap();
    assert_eq!(quadratic, LocalBound { bound: 2, roots: 1 });
    assert!(quadratic.holds());
    let cubic = local_ball_cardinality_bound(&jets(&[0.0], &[0.0, 0.01, 0.0, 1.0], 3)).unwrap();
    assert_eq!(cubic, LocalBound { bound: 1, roots: 1 });
    // x(x − 0.1)(x + 0.1) is transverse at 0 but has three roots in [−1, 1]
    let wide = local_ball_cardinality_bound(&jets(&[0.0], &[0.0, -0.01, 0.0, 1.0], 3)).unwrap();
    assert_eq!(wide.roots, 3);
    assert!(!wide.holds());
    assert!(matches!(
        local_ball_cardinality_bound(&jets(&[0.0, 1.0], &[0.0, 1.0, 0.0, 1.0], 2)),
        Err(Error::Unbounded(2))
    ));
}

#[test]
fn polynomial_basics() {
    let p = poly(&[1.0, 2.0, 0.0, 0.0]);
    assert_eq!(p.degree(), Some(1));
    assert_eq!(Polynomial::zero().degree(), None);
    assert_eq!(p.eval(2.0), 5.0);
    assert_eq!(p.derivative().coefficients(), &[2.0]);
    assert!((&p - &p).is_zero());
    let q = Polynomial::from_roots(2.0, &[1.0, -1.0]).unwrap();
    assert_eq!(q.coefficients(), &[-2.0, 0.0, 2.0]);
}
