use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starkrankin::error::Error;
use starkrankin::exactalg::arith::is_prime;
use starkrankin::exactalg::rational::{int, rat};
use starkrankin::elliptic::{CurvePoint, Fp, Reduction, WeierstrassModel};

fn e11() -> WeierstrassModel {
    WeierstrassModel::new([0, -1, 1, -10, -20]).unwrap()
}

fn e37() -> WeierstrassModel {
    WeierstrassModel::new([0, 0, 1, -1, 0]).unwrap()
}

/// q ∏ (1 − q^n)² (1 − q^{11n})² to q^len.
fn eta_product_11(len: usize) -> Vec<i64> {
    let mut s = vec![0i64; len + 1];
    s[1] = 1;
    for n in 1..=len {
        for step in [n, 11 * n] {
            if step > len {
                continue;
            }
            for _ in 0..2 {
                for i in (step..=len).rev() {
                    s[i] -= s[i - step];
                }
            }
        }
    }
    s
}

#[test]
fn counts_from_enumeration() {
    let e = e11();
    assert_eq!(e.count_points(3).unwrap(), 5);
    assert_eq!(e.trace_ap(3).unwrap(), -1);
    let e = WeierstrassModel::new([0, 0, 0, 1, 0]).unwrap();
    assert_eq!(e.count_points(3).unwrap(), 4);
    assert_eq!(e.trace_ap(3).unwrap(), 0);
}

#[test]
fn traces_match_eta_product() {
    let e = e11();
    let f = eta_product_11(200);
    for p in (2..200u64).filter(|&p| is_prime(p) && p != 11) {
        assert_eq!(e.trace_ap(p).unwrap(), f[p as usize], "a_{p}");
    }
    assert_eq!(e.bad_prime_aq(11).unwrap(), f[11]);
}

#[test]
fn bad_primes() {
    assert_eq!(e11().bad_prime_aq(11).unwrap(), 1);
    assert_eq!(e11().reduction(11).unwrap(), Reduction::SplitMultiplicative);
    assert!(matches!(e11().bad_prime_aq(3), Err(Error::Domain(_))));
    // 37a1 at 37: the singular cubic has q + 1 − a_q points
    let e = e37();
    let a = e.bad_prime_aq(37).unwrap();
    assert_eq!(e.count_points_any(37) as i64, 37 + 1 - a);
    // additive: y² = x³ − q²x
    for q in [5u64, 7, 13] {
        let q2 = (q * q) as i64;
        let e = WeierstrassModel::new([0, 0, 0, -q2, 0]).unwrap();
        assert_eq!(e.bad_prime_aq(q).unwrap(), 0);
        assert_eq!(e.reduction(q).unwrap(), Reduction::Additive);
    }
    // nonsplit example: 14a1 = [1,0,1,4,−6] is split at 7 and nonsplit at 2
    let e = WeierstrassModel::new([1, 0, 1, 4, -6]).unwrap();
    for q in [2u64, 7] {
        let a = e.bad_prime_aq(q).unwrap();
        assert_eq!(e.count_points_any(q) as i64, q as i64 + 1 - a, "q = {q}");
    }
    assert!(e.check_conductor(14).is_ok());
}

#[test]
fn bad_and_large_primes_rejected() {
    assert!(matches!(e11().count_points(11), Err(Error::Domain(_))));
    assert!(matches!(e11().count_points(100_003), Err(Error::Resource(_))));
}

#[test]
fn hasse_bound_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let primes: Vec<u64> = (3..98).filter(|&p| is_prime(p)).collect();
    let mut done = 0;
    while done < 100 {
        let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-20..=20));
        let Ok(e) = WeierstrassModel::new(a) else { continue };
        let p = primes[rng.gen_range(0..primes.len())];
        match e.trace_ap(p) {
            Ok(ap) => assert!(ap * ap <= 4 * p as i64),
            Err(Error::Domain(_)) => continue,
            Err(other) => panic!("{other}"),
        }
        done += 1;
    }
}

#[test]
fn torsion_point_of_11a1() {
    let e = e11();
    let p = CurvePoint::rational(int(5), int(5));
    assert!(e.on_curve(&p));
    assert!(e.mul(&p, 5).unwrap().is_infinity());
    for k in 1..5 {
        assert!(!e.mul(&p, k).unwrap().is_infinity());
    }
    assert_eq!(e.add(&p, &CurvePoint::Infinity).unwrap(), p);
}

#[test]
fn multiples_on_37a1_by_repeated_addition() {
    let e = e37();
    let p = CurvePoint::rational(int(0), int(0));
    let mut acc = CurvePoint::Infinity;
    for n in 1..=20 {
        acc = e.add(&acc, &p).unwrap();
        assert_eq!(e.mul(&p, n).unwrap(), acc, "n = {n}");
        assert!(e.on_curve(&acc));
    }
    let two = e.mul(&p, 2).unwrap();
    assert_eq!(two, CurvePoint::rational(int(1), int(0)));
    let five = e.mul(&p, 5).unwrap();
    assert_eq!(five, CurvePoint::rational(rat(1, 4), rat(-5, 8)));
    assert!(e.add(&p, &CurvePoint::rational(int(1), int(1))).is_err());
}

#[test]
fn group_order_annihilates_fp_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (e, p) in [(e11(), 23u64), (e37(), 41), (e11(), 101)] {
        let pts = e.points_fp(p).unwrap();
        let n = e.count_points(p).unwrap();
        assert_eq!(pts.len() as u64, n);
        for _ in 0..20 {
            let q = &pts[rng.gen_range(0..pts.len())];
            assert!(e.mul(q, n as i64).unwrap().is_infinity());
        }
    }
}

#[test]
fn reduction_of_rational_points() {
    let e = e37();
    let p = CurvePoint::rational(int(0), int(0));
    let five = e.mul(&p, 5).unwrap();
    // (1/4, −5/8) meets 2 in the denominator
    assert!(five.reduce(2).is_none());
    let r = five.reduce(5).unwrap();
    assert!(e.on_curve(&r));
    assert_eq!(r, e.mul(&p.reduce(5).unwrap(), 5).unwrap());
}

fn fp_points(e: &WeierstrassModel, p: u64) -> Vec<CurvePoint<Fp>> {
    e.points_fp(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    #[test]
    fn associativity_over_fp(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let e = e11();
        let pts = fp_points(&e, 31);
        let (a, b, c) = (&pts[i % pts.len()], &pts[j % pts.len()], &pts[k % pts.len()]);
        let l = e.add(&e.add(a, b).unwrap(), c).unwrap();
        let r = e.add(a, &e.add(b, c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn rational_group_law_stays_on_curve(m in -6i64..=6, n in -6i64..=6) {
        let e = e37();
        let p = CurvePoint::rational(int(0), int(0));
        let a = e.mul(&p, m).unwrap();
        let b = e.mul(&p, n).unwrap();
        let s = e.add(&a, &b).unwrap();
        prop_assert!(e.on_curve(&s));
        prop_assert_eq!(s, e.mul(&p, m + n).unwrap());
    }
}
