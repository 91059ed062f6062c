use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use starkrankin::exactalg::rational::{int, rat};
use starkrankin::exactalg::{CyclotomicElement, NumCtx};
use starkrankin::heckechar::RingClassCharacter;
use starkrankin::lfun::{
    dirichlet_partial_sum, hecke_l_partial_sum, hecke_roots, rankin_local_factor, rankin_product_identity,
    sqrt_rational, EulerData, HeckeRoots, LocalFactor, RootLabel,
};
use starkrankin::quadfield::{ImagQuadField, Order};
use starkrankin::theta::theta_series;

type C = CyclotomicElement;

fn order(d: u64, c: u64) -> Arc<Order> {
    Arc::new(ImagQuadField::new(d).unwrap().order(c).unwrap())
}

/// a_q of 11a1 at small primes.
fn a11(q: u64) -> i64 {
    match q {
        2 => -2,
        3 => -1,
        5 => 1,
        7 => -2,
        11 => 1,
        13 => 4,
        17 => -2,
        19 => 0,
        23 => -1,
        43 => -6,
        _ => panic!("a_{q} not tabulated"),
    }
}

fn data_11a1(psi: RingClassCharacter) -> EulerData {
    let n = {
        let c = psi.conductor();
        starkrankin::exactalg::arith::lcm_u(psi.field().d() * c * c, 11)
    };
    let a_f: BTreeMap<u64, i64> = starkrankin::exactalg::arith::prime_divisors(n)
        .into_iter()
        .map(|q| (q, a11(q)))
        .collect();
    EulerData::new(psi, 11, a_f).unwrap()
}

fn c(n: i64) -> C {
    C::from_int(n)
}

#[test]
fn bad_prime_roots() {
    let r = hecke_roots(&c(5), &C::zero(), 11, 2).unwrap();
    assert_eq!((r.alpha, r.beta, r.label), (c(5), C::zero(), RootLabel::Bad));
}

#[test]
fn weight_one_split_double_root() {
    // θ_1 on D_K = 7 at q = 2: X² − 2X + 1
    let r = hecke_roots(&c(2), &c(1), 2, 1).unwrap();
    assert_eq!((r.alpha, r.beta), (c(1), c(1)));
}

#[test]
fn weight_one_inert_roots_are_plus_minus_one() {
    // a_3 = 0, χ_7(3) = −1: X² − 1
    let r = hecke_roots(&c(0), &c(-1), 3, 1).unwrap();
    assert_eq!((r.alpha.clone(), r.beta.clone()), (c(1), c(-1)));
    assert_eq!(r.product(), c(-1));
    assert_eq!(r.label, RootLabel::Argument);
}

#[test]
fn weight_one_cyclotomic_roots() {
    // ψ(℘) = ζ_3, ψ(℘̄) = ζ_3²: a = −1, αβ = 1
    let r = hecke_roots(&c(-1), &c(1), 2, 1).unwrap();
    assert_eq!(r.sum(), c(-1));
    assert_eq!(r.product(), c(1));
    assert_eq!(r.alpha, C::zeta_pow(3, 1));
    // inert with nebentype value ζ_3: X² + ζ_3 has roots ±ζ_12^{...}
    let z = C::zeta_pow(3, 1);
    let r = hecke_roots(&C::zero(), &z, 5, 1).unwrap();
    assert_eq!(r.sum(), C::zero());
    assert_eq!(r.product(), z);
}

#[test]
fn ordinary_elliptic_roots() {
    // 11a1 at 3: X² + X + 3
    let r = hecke_roots(&c(-1), &c(1), 3, 2).unwrap();
    assert_eq!(r.sum(), c(-1));
    assert_eq!(r.product(), c(3));
    match r.label {
        RootLabel::Ordinary { d, sqrt_residue } => {
            assert_eq!(d, -11);
            // (a + √d)/2 with √−11 ↦ r: unit iff r ≡ a mod 3
            assert_eq!(sqrt_residue, 2);
        }
        other => panic!("unexpected label {other:?}"),
    }
    // supersingular: a_19 = 0 falls back to the argument rule
    let r = hecke_roots(&c(0), &c(1), 19, 2).unwrap();
    assert_eq!(r.label, RootLabel::Argument);
    assert_eq!(r.product(), c(19));
}

#[test]
fn square_roots_of_rationals() {
    for (n, d) in [(4, 9), (-3, 1), (-11, 4), (2, 1), (-1, 1), (12, 5)] {
        let r = rat(n, d);
        let s = sqrt_rational(&r);
        assert_eq!(&s * &s, C::from_rational(r));
    }
}

#[test]
fn rankin_trivial_cases() {
    let z = HeckeRoots::given(2, 1, C::zero(), C::zero());
    let lf = rankin_local_factor(&z, &z);
    assert_eq!(lf.coeffs, vec![C::one()]);
    let g = HeckeRoots::given(2, 1, c(1), c(1));
    let f = HeckeRoots::given(2, 2, c(3), c(-5));
    let lf = rankin_local_factor(&g, &f);
    let expect = LocalFactor::from_roots(2, &[c(3), c(3), c(-5), c(-5)]);
    assert_eq!(lf, expect);
    assert_eq!(lf.degree(), 4);
}

#[test]
fn rankin_factor_matches_coefficient_stream() {
    // g = θ_1 on D_K = 7, f = 11a1, q ∈ {2, 23}: compare against a_{q^n}(g) a_{q^n}(f)
    let th = theta_series(&RingClassCharacter::trivial(order(7, 1)), 23 * 23 * 23).unwrap();
    for (q, nmax) in [(2u64, 9u32), (23, 3)] {
        let g_pp: Vec<C> = (0..=nmax).map(|n| th.series.coeffs()[q.pow(n) as usize].clone()).collect();
        let aq = a11(q);
        let mut f_pp = vec![c(1), c(aq)];
        for n in 2..=nmax as usize {
            let next = &f_pp[n - 1].scale(&int(aq)) - &f_pp[n - 2].scale(&int(q as i64));
            f_pp.push(next);
        }
        let g = hecke_roots(&g_pp[1], &c(1), q, 1).unwrap();
        let f = hecke_roots(&c(aq), &c(1), q, 2).unwrap();
        assert!(rankin_product_identity(&g_pp, &f_pp, &g, &f), "q = {q}");
        // a perturbed stream is caught
        let mut bad = f_pp.clone();
        bad[2] = &bad[2] + &c(1);
        assert!(!rankin_product_identity(&g_pp, &bad, &g, &f));
    }
}

#[test]
fn euler_ratio_main_scenario() {
    let d = data_11a1(RingClassCharacter::trivial(order(11, 1)));
    assert_eq!(d.level(), 11);
    let v = d.euler_ratio_bad(1).unwrap();
    assert!(v.value.is_one());
    assert!(v.nonvanishing);
    assert!(d.euler_hr(-1).unwrap().value.is_one());
    assert!(d.euler_n(-1).unwrap().is_one());
    // the literal product gives 6/5 on this scenario
    assert_eq!(d.euler_ratio_literal().unwrap().value, C::from_rational(rat(6, 5)));
}

#[test]
fn euler_ratio_synthetic_7_11() {
    let d = data_11a1(RingClassCharacter::trivial(order(7, 1)));
    assert_eq!(d.level(), 77);
    let f7 = d.f_roots(7).unwrap();
    // hand expansion of the literal product
    let q7 = &(&c(1) + &C::from_rational(rat(2, 7))) + &C::from_rational(rat(1, 7));
    let den7 = &c(1) - &f7.alpha.scale(&rat(1, 7));
    let q11 = C::from_rational(rat(100, 121)).div(&C::from_rational(rat(10, 11))).unwrap();
    let hand = &q7.div(&den7).unwrap() * &q11;
    let lit = d.euler_ratio_literal().unwrap();
    assert_eq!(lit.value, hand);
    // closed form: (1 − β_f(7)/7)(1 − a_11/11)
    let closed = &(&c(1) - &f7.beta.scale(&rat(1, 7))) * &C::from_rational(rat(10, 11));
    let v = d.euler_ratio_bad(1).unwrap();
    assert_eq!(v.value, closed);
    assert!(v.nonvanishing);
    // at the ramified prime the two realizations agree
    assert_eq!(lit.local[0], v.local[0]);
}

#[test]
fn hr_at_weight_one_equals_bad_ratio() {
    for dk in [7u64, 8, 19, 35, 40, 43] {
        let o = order(dk, 1);
        let inv = o.class_group().invariants().to_vec();
        let chars: Vec<RingClassCharacter> = if inv.is_empty() {
            vec![RingClassCharacter::trivial(o.clone())]
        } else {
            (0..inv[0]).map(|e| RingClassCharacter::new(o.clone(), vec![e]).unwrap()).collect()
        };
        for psi in chars {
            let d = data_11a1(psi);
            let hr = d.euler_hr(-1).unwrap();
            let bad = d.euler_ratio_bad(1).unwrap();
            assert_eq!(hr.value, bad.value, "D_K = {dk}");
            assert!(hr.nonvanishing);
        }
    }
}

#[test]
fn pet_factor_and_e_c() {
    let d = data_11a1(RingClassCharacter::trivial(order(7, 1)));
    // q = 11 splits in Q(√−7); α, β = ψ(𝔮), ψ(𝔮̄) = 1 at weight one
    let pet = d.euler_pet(-1).unwrap();
    assert_eq!(pet.local.len(), 1);
    let t = rat(10, 11);
    assert_eq!(pet.value, C::from_rational(&t * &t * rat(11, 12)));
    // families at l ≥ 0 use the infinity-type values
    let pet0 = d.euler_pet(0).unwrap();
    assert!(pet0.nonvanishing);
    let g = d.g_roots(11, 0).unwrap();
    assert_eq!(g.product(), c(121));
    assert!(d.euler_n(0).is_ok());
    assert_eq!(starkrankin::lfun::e_c(&RingClassCharacter::trivial(order(7, 3))), rat(4, 2));
}

#[test]
fn l_series_of_psi_and_theta_agree() {
    let mut ctx = NumCtx::new(128).unwrap();
    let psi = RingClassCharacter::trivial(order(7, 1));
    let terms = 10_000;
    let th = theta_series(&psi, terms).unwrap();
    let s = int(3);
    let a = dirichlet_partial_sum(th.series.coeffs(), &s, &int(0), terms, &mut ctx).unwrap();
    let b = hecke_l_partial_sum(&psi, 0, &s, terms, &mut ctx).unwrap();
    let (ar, ai) = a.value.to_f64();
    let (br, bi) = b.to_f64();
    assert!((ar - br).abs() < 1e-6 && (ai - bi).abs() < 1e-6);
    assert!(a.tail_bound < 1e-6);
    // ψN^k at s + k
    let b2 = hecke_l_partial_sum(&psi, 2, &int(5), terms, &mut ctx).unwrap();
    let (cr, ci) = b2.to_f64();
    assert!((cr - br).abs() < 1e-12 && (ci - bi).abs() < 1e-12);
}

#[test]
fn partial_sum_edge_cases() {
    let mut ctx = NumCtx::new(64).unwrap();
    let zero = vec![C::zero(); 11];
    let r = dirichlet_partial_sum(&zero, &int(2), &int(0), 10, &mut ctx).unwrap();
    assert_eq!(r.value.to_f64(), (0.0, 0.0));
    assert!(dirichlet_partial_sum(&zero, &BigRational::from_integer(1.into()), &int(0), 10, &mut ctx).is_err());
}
