use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starkrankin::elliptic::{CurvePoint, WeierstrassModel};
use starkrankin::error::Error;
use starkrankin::exactalg::rational::{int, rat, valuation};
use starkrankin::padic::{elliptic_unit_log, embed_k, points_agree, FormalGroupContext, PadicNumber};
use starkrankin::quadfield::{ImagQuadField, Order, QuadNum};

fn e11() -> WeierstrassModel {
    WeierstrassModel::new([0, -1, 1, -10, -20]).unwrap()
}

fn e37() -> WeierstrassModel {
    WeierstrassModel::new([0, 0, 1, -1, 0]).unwrap()
}

fn order(d: u64) -> Order {
    ImagQuadField::new(d).unwrap().order(1).unwrap()
}

fn qp(r: BigRational, p: u64, n: i64) -> PadicNumber {
    PadicNumber::from_rational(&r, p, n).unwrap()
}

fn agree(a: &PadicNumber, b: &PadicNumber, n: i64) -> bool {
    a.sub(b).with_precision(n).is_zero()
}

/// Σ_{k ≤ terms} (−1)^{k+1} z^k / k over Q.
fn log1p_oracle(z: &BigRational, terms: u32) -> BigRational {
    let mut acc = BigRational::zero();
    let mut pw = BigRational::one();
    for k in 1..=terms {
        pw = &pw * z;
        let t = &pw / BigRational::from_integer(k.into());
        if k % 2 == 1 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

#[test]
fn log_of_p_is_zero() {
    let l = PadicNumber::from_int(3, 3, 20).log().unwrap();
    assert!(l.is_zero());
    let l = PadicNumber::from_int(7, 49, 20).log().unwrap();
    assert!(l.is_zero());
    assert!(matches!(PadicNumber::zero(5, 10).log(), Err(Error::Domain(_))));
}

#[test]
fn log_one_plus_p_matches_series() {
    for p in [3u64, 5, 7] {
        let x = PadicNumber::from_int(p, 1 + p as i64, 20);
        let l = x.log().unwrap();
        let oracle = qp(log1p_oracle(&int(p as i64), 60), p, 20);
        assert!(agree(&l, &oracle, 20), "p = {p}: {l} vs {oracle}");
    }
}

#[test]
fn log_of_teichmuller_is_zero() {
    for p in [5u64, 7, 11] {
        for a in 1..p as i64 {
            let w = PadicNumber::from_int(p, a, 20).teichmuller().unwrap();
            assert!(w.log().unwrap().is_zero(), "ω({a}) in Q_{p}");
            assert!(agree(&w.pow(p as i64 - 1).unwrap(), &PadicNumber::one(p, 20), 20));
        }
    }
}

#[test]
fn exp_inverts_log_on_principal_units() {
    for p in [3u64, 5, 7] {
        let x = PadicNumber::from_int(p, 1 + p as i64, 30);
        let back = x.log().unwrap().exp().unwrap();
        assert!(agree(&back, &x, 30), "p = {p}");
    }
    assert!(matches!(PadicNumber::from_int(5, 2, 10).exp(), Err(Error::Domain(_))));
}

#[test]
fn square_roots() {
    let (a, b) = PadicNumber::from_int(5, 4, 10).sqrt().unwrap();
    let two = PadicNumber::from_int(5, 2, 10);
    assert!((agree(&a, &two, 10) && agree(&b, &two.neg(), 10)) || (agree(&b, &two, 10) && agree(&a, &two.neg(), 10)));
    assert_eq!(two.neg().digits()[..3], [3, 4, 4]);
    assert!(matches!(PadicNumber::from_int(5, 5, 10).sqrt(), Err(Error::NoSquareRoot(_))));
    assert!(matches!(PadicNumber::from_int(5, 2, 10).sqrt(), Err(Error::NoSquareRoot(_))));
    // √−11 in Q_3, squared back
    let m11 = PadicNumber::from_int(3, -11, 25);
    let (r, _) = m11.sqrt().unwrap();
    assert!(agree(&r.mul(&r), &m11, 25));
}

/// r with r² ≡ −d mod p^n and r ≡ r0 mod p, one digit at a time.
fn digit_root(d: i64, p: u64, n: u32, r0: i64) -> BigInt {
    let mut r = BigInt::from(r0);
    let mut m = BigInt::from(p);
    for _ in 1..n {
        let next = &m * BigInt::from(p);
        let target = BigInt::from(-d);
        r = (0..p as i64)
            .map(|k| &r + &m * k)
            .find(|c| ((c * c - &target) % &next).is_zero())
            .unwrap();
        m = next;
    }
    r
}

#[test]
fn embedding_of_k_at_three() {
    let o = order(11);
    let root = embed_k(&o, 3, &QuadNum::sqrt_d(-11), 20).unwrap();
    assert_eq!(root.digits()[0], 1);
    let oracle = PadicNumber::from_bigint(3, &digit_root(11, 3, 20, 1), 20);
    assert!(agree(&root, &oracle, 20));
    // the conjugate goes to the other root
    let conj = embed_k(&o, 3, &QuadNum::sqrt_d(-11).conj(), 20).unwrap();
    assert!(agree(&conj, &root.neg(), 20));
    // multiplicativity of the norm
    let g = QuadNum::new(-11, rat(5, 2), rat(3, 2));
    let a = embed_k(&o, 3, &g, 20).unwrap();
    let b = embed_k(&o, 3, &g.conj(), 20).unwrap();
    assert!(agree(&a.mul(&b), &qp(g.norm(), 3, 20), 20));
    // inert prime
    assert!(matches!(embed_k(&o, 2, &QuadNum::sqrt_d(-11), 20), Err(Error::Domain(_))));
}

#[test]
fn elliptic_unit_at_three() {
    let o = order(11);
    let u = elliptic_unit_log(&o, 3, 20).unwrap();
    let g = &u.generator;
    assert_eq!(g.norm(), int(3));
    // ℘ is the prime sent into 3Z_3, generated by (−1 + √−11)/2 = −(1 − √−11)/2
    assert_eq!((g.x.clone(), g.y.clone()), (rat(-1, 2), rat(1, 2)));
    // oracle: independent Hensel root, then (e^{p−1} − 1) through the rational series
    let r = digit_root(11, 3, 40, 1);
    let e = &g.x + &g.y * BigRational::from_integer(r);
    let ep = qp(e, 3, 40);
    let unit = if ep.valuation() > 0 { ep.div(&PadicNumber::from_int(3, 3, 40)).unwrap() } else { ep };
    let z = unit.pow(2).unwrap().sub(&PadicNumber::one(3, 40)).to_rational();
    let oracle = qp(log1p_oracle(&z, 80) / int(2), 3, 20);
    assert!(agree(&u.log, &oracle, 18), "{} vs {}", u.log, oracle);
    assert!(!u.log.is_zero());
    // −γ has the same log; ℘̄ negates it
    let neg = embed_k(&o, 3, &QuadNum::new(-11, -&g.x, -&g.y), 22).unwrap();
    assert!(agree(&neg.log().unwrap(), &u.log, 18));
    let bar = embed_k(&o, 3, &g.conj(), 22).unwrap();
    assert!(agree(&bar.log().unwrap(), &u.log.neg(), 18));
    // (1 + √−11)/2 generates ℘̄, a global sign
    let u_bar = embed_k(&o, 3, &QuadNum::half(-11, 1, 1), 22).unwrap();
    assert_eq!(u_bar.valuation(), 0);
    assert!(agree(&u_bar.log().unwrap(), &u.log.neg(), 18));
    // h > 1
    assert!(matches!(elliptic_unit_log(&order(23), 3, 20), Err(Error::Unsupported(_))));
}

#[test]
fn w_series_leading_terms() {
    // w = t³ + a1 t⁴ + (a1² + a2) t⁵ + (a1³ + 2a1a2 + a3) t⁶ + …
    let e = WeierstrassModel::new([1, 2, 3, 4, 5]).unwrap();
    let ctx = FormalGroupContext::with_t_precision(&e, 7, 5, 10).unwrap();
    let w = ctx.w_series();
    let expect = [0, 0, 0, 1, 1, 3, 1 + 4 + 3];
    for (n, c) in expect.iter().enumerate() {
        assert_eq!(w[n], int(*c), "t^{n}");
    }
    assert_eq!(ctx.log_series()[1], int(1));
}

#[test]
fn log_series_integrality() {
    for (e, p) in [(e37(), 5u64), (e11(), 3), (e11(), 7)] {
        let ctx = FormalGroupContext::with_t_precision(&e, p, 10, 61).unwrap();
        for n in 1..=60usize {
            let c = &ctx.log_series()[n];
            if c.is_zero() {
                continue;
            }
            let ord_n = starkrankin::exactalg::arith::valuation(n as i128, p) as i64;
            assert!(valuation(c, p) >= -ord_n, "t^{n} at p = {p}");
            assert!(ctx.omega_series()[n - 1].is_integer());
        }
    }
}

/// Σ a_n (Σ b_k z^k)^n to degree len.
fn compose(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    let mut pw = vec![BigRational::zero(); len];
    pw[0] = BigRational::one();
    for an in a.iter().take(len) {
        for (o, x) in out.iter_mut().zip(&pw) {
            *o += an * x;
        }
        let mut next = vec![BigRational::zero(); len];
        for (i, x) in pw.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(len - i) {
                next[i + j] += x * y;
            }
        }
        pw = next;
    }
    out
}

#[test]
fn log_and_exp_series_are_inverse() {
    let ctx = FormalGroupContext::with_t_precision(&e37(), 5, 10, 24).unwrap();
    let c = compose(ctx.log_series(), ctx.exp_series(), 24);
    for (n, x) in c.iter().enumerate() {
        assert_eq!(*x, if n == 1 { int(1) } else { int(0) }, "z^{n}");
    }
}

#[test]
fn exp_newton_matches_exp_series() {
    let ctx = FormalGroupContext::new(&e37(), 5, 30).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let x = qp(rat(rng.gen_range(-10_000i64..10_000), 1) * int(5), 5, 30);
        let a = ctx.exp_f(&x).unwrap();
        let b = ctx.exp_f_series(&x).unwrap();
        assert!(agree(&a, &b, 30));
        assert!(agree(&ctx.log_f(&a).unwrap(), &x, 30));
    }
    let bad = PadicNumber::from_int(5, 2, 30);
    assert!(matches!(ctx.exp_f(&bad), Err(Error::Precision(_))));
}

#[test]
fn torsion_point_has_zero_log() {
    let ctx = FormalGroupContext::new(&e11(), 3, 20).unwrap();
    assert_eq!(ctx.group_order(), 5);
    let l = ctx.formal_log(&CurvePoint::rational(int(5), int(5))).unwrap();
    assert!(l.torsion && l.value.is_zero());
    let o = ctx.formal_log(&CurvePoint::Infinity).unwrap();
    assert!(!o.torsion && o.value.is_zero());
}

#[test]
fn formal_log_is_linear_on_37a1() {
    let e = e37();
    let ctx = FormalGroupContext::new(&e, 5, 30).unwrap();
    let p = CurvePoint::rational(int(0), int(0));
    let l1 = ctx.formal_log(&p).unwrap();
    assert!(!l1.torsion && !l1.value.is_zero());
    for n in 2..=10i64 {
        let ln = ctx.formal_log(&e.mul(&p, n).unwrap()).unwrap();
        assert!(agree(&ln.value, &l1.value.scale_int(n), 30), "n = {n}");
    }
    // the Q_p route agrees with the rational route
    let pp = CurvePoint::Affine { x: PadicNumber::zero(5, 40), y: PadicNumber::zero(5, 40) };
    let lp = ctx.formal_log_padic(&pp).unwrap();
    assert!(agree(&lp.value, &l1.value, 25));
}

#[test]
fn formal_log_is_a_homomorphism_on_formal_points() {
    let e = e11();
    let ctx = FormalGroupContext::new(&e, 5, 30).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let t1 = qp(int(rng.gen_range(1..100_000i64) * 5), 5, 40);
        let t2 = qp(int(rng.gen_range(1..100_000i64) * 25), 5, 40);
        let a = ctx.point_from_t(&t1).unwrap();
        let b = ctx.point_from_t(&t2).unwrap();
        assert!(e.on_curve(&a) && e.on_curve(&b));
        let s = e.add_unchecked(&a, &b);
        let ts = FormalGroupContext::t_of_point(&s).unwrap().unwrap();
        let lhs = ctx.log_f(&ts.with_precision(30)).unwrap();
        let rhs = ctx.log_f(&t1.with_precision(30)).unwrap().add(&ctx.log_f(&t2.with_precision(30)).unwrap());
        assert!(agree(&lhs, &rhs, 25));
    }
}

#[test]
fn precision_honesty() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let n = 15;
    for _ in 0..100 {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let a = rat(rng.gen_range(-1_000_000..1_000_000i64), rng.gen_range(1..1000i64));
        let b = rat(rng.gen_range(1..1_000_000i64), rng.gen_range(1..1000i64));
        if a.is_zero() || valuation(&a, p) != 0 || valuation(&b, p) != 0 {
            continue;
        }
        let (al, bl) = (qp(a.clone(), p, n + 10), qp(b.clone(), p, n + 10));
        let (an, bn) = (qp(a.clone(), p, n), qp(b.clone(), p, n));
        assert_eq!(an.add(&bn), al.add(&bl).with_precision(n));
        assert_eq!(an.mul(&bn), al.mul(&bl).with_precision(n));
        assert_eq!(an.div(&bn).unwrap(), al.div(&bl).unwrap().with_precision(n));
        assert_eq!(an.log().unwrap(), al.log().unwrap().with_precision(n));
        let pa = an.scale_int(p as i64);
        assert_eq!(pa.exp().unwrap(), al.scale_int(p as i64).exp().unwrap().with_precision(pa.precision()));
        let sq = an.mul(&an);
        let sl = al.mul(&al);
        let (r1, _) = sq.sqrt().unwrap();
        let (r2, _) = sl.sqrt().unwrap();
        assert!(r1 == r2.with_precision(r1.precision()) || r1 == r2.neg().with_precision(r1.precision()));
    }
}

fn lambda_3() -> PadicNumber {
    qp(rat(25, 6), 3, 40)
}

#[test]
fn recovery_round_trip_and_negative_controls() {
    let e = e11();
    let ctx = FormalGroupContext::new(&e, 3, 20).unwrap();
    let u = elliptic_unit_log(&order(11), 3, 30).unwrap();
    // a formal point: t = 3·7 and its (x, y)
    let t0 = PadicNumber::from_int(3, 21, 30);
    let p0 = ctx.point_from_t(&t0).unwrap();
    let log0 = ctx.log_f(&t0).unwrap();
    let lambda = lambda_3();
    let integral = lambda.mul(&log0).mul(&log0).div(&u.log).unwrap();
    let r = ctx.recover_point(&integral, &u.log, &lambda).unwrap();
    let prec = 10;
    assert!(points_agree(&r.plus, &p0, prec) || points_agree(&r.minus, &p0, prec));
    assert!(points_agree(&r.plus, &e.neg(&r.minus), prec));
    // formal_log of the output is ±X
    let tp = r.t_plus.clone().unwrap();
    assert!(agree(&ctx.log_f(&tp).unwrap(), &r.log_value, 15));
    // zero integral
    let z = ctx.recover_point(&PadicNumber::zero(3, 20), &u.log, &lambda).unwrap();
    assert!(z.plus.is_infinity() && z.minus.is_infinity());
    // non-square quotient
    let bad = integral.scale_int(2);
    assert!(matches!(ctx.recover_point(&bad, &u.log, &lambda), Err(Error::NoSquareRoot(_))));
    let odd = integral.scale_int(3);
    assert!(matches!(ctx.recover_point(&odd, &u.log, &lambda), Err(Error::NoSquareRoot(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn log_of_square_is_twice_log(a in 1i64..1_000_000, p_idx in 0usize..3) {
        let p = [3u64, 5, 7][p_idx];
        prop_assume!(a % p as i64 != 0);
        let x = PadicNumber::from_int(p, a, 25);
        let lx = x.log().unwrap();
        let lxx = x.mul(&x).log().unwrap();
        prop_assert!(agree(&lxx, &lx.scale_int(2), 25));
    }

    #[test]
    fn sqrt_squares_back(a in 1i64..1_000_000, k in 0i64..3) {
        let p = 7u64;
        prop_assume!(a % 7 != 0);
        let x = PadicNumber::from_int(p, a * a * 49i64.pow(k as u32), 20);
        let (r, s) = x.sqrt().unwrap();
        prop_assert!(agree(&r.mul(&r), &x, 20));
        prop_assert!(agree(&r, &s.neg(), 20));
    }
}
