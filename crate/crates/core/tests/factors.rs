use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starkrankin::elliptic::{CurvePoint, WeierstrassModel};
use starkrankin::error::Error;
use starkrankin::exactalg::arith::is_prime;
use starkrankin::exactalg::rational::{int, pow, rat};
use starkrankin::exactalg::CyclotomicElement as C;
use starkrankin::factors::*;
use starkrankin::heckechar::RingClassCharacter;
use starkrankin::lfun::e_c;
use starkrankin::padic::{elliptic_unit_log, points_agree, FormalGroupContext, PadicNumber};
use starkrankin::quadfield::{ImagQuadField, Order};

fn order(d: u64, c: u64) -> Arc<Order> {
    Arc::new(ImagQuadField::new(d).unwrap().order(c).unwrap())
}

fn e11() -> WeierstrassModel {
    WeierstrassModel::new([0, -1, 1, -10, -20]).unwrap()
}

fn e37() -> WeierstrassModel {
    WeierstrassModel::new([0, 0, 1, -1, 0]).unwrap()
}

fn main_scenario() -> FactorScenario {
    FactorScenario::new(e11(), 11, RingClassCharacter::trivial(order(11, 1)), 3).unwrap()
}

/// 15a1 with the genus character of Q(√−15) at p = 17.
fn genus_scenario() -> FactorScenario {
    let psi = RingClassCharacter::new(order(15, 1), vec![1]).unwrap();
    FactorScenario::new(WeierstrassModel::new([1, 1, 1, -10, -10]).unwrap(), 15, psi, 17).unwrap()
}

/// 26a1 with an order-3 character of Q(√−23) at p = 3.
fn cubic_scenario() -> FactorScenario {
    let psi = RingClassCharacter::new(order(23, 1), vec![1]).unwrap();
    FactorScenario::new(WeierstrassModel::new([1, 0, 1, -5, -8]).unwrap(), 26, psi, 3).unwrap()
}

fn lv(n: u64, n_e: u64, dk: u64, c: u64, h_c: u64, shared: u32) -> LevelData {
    LevelData { n, n_e, dk, c, h_c, w_c: 2, shared_primes: shared }
}

#[test]
fn euler_identity_for_l_up_to_five() {
    for p in [3u64, 5, 7] {
        for l in -1..=5 {
            let chk = verify_euler_identity(l, p, 20, (1000 + l) as u64).unwrap();
            assert!(chk.outcome.holds && chk.exact, "l = {l}, p = {p}");
            assert_eq!(chk.samples.len(), 20);
            assert!(chk.holds(), "numeric failure at l = {l}, p = {p}");
        }
    }
}

#[test]
fn e_hr_matches_hand_expansion_at_l_one() {
    let (l, p) = (1i64, 5u64);
    let f = e_hr(l, p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let a = rat(rng.gen_range(1..5000), rng.gen_range(1..50));
        let alpha = rat(rng.gen_range(-200..200), rng.gen_range(1..20));
        if alpha.is_zero() {
            continue;
        }
        // B = p^4/A, β_f = p/α, ℰ(5,2,3) = (1 − αB/p³)²(1 − βB/p³)², ℰ₁ = 1 − B²/p⁵, ℰ₀ = 1 − B²/p⁴
        let b = int(625) / &a;
        let beta = int(5) / &alpha;
        let p3 = int(125);
        let one = BigRational::one();
        let t1 = &one - &alpha * &b / &p3;
        let t2 = &one - &beta * &b / &p3;
        let e1 = &one - &b * &b / int(3125);
        let e0 = &one - &b * &b / int(625);
        if e1.is_zero() || e0.is_zero() {
            continue;
        }
        let hand = &t1 * &t1 * &t2 * &t2 / (e1 * e0);
        assert_eq!(f.eval(&a, &alpha).unwrap(), hand);
    }
}

#[test]
fn e_hr_tends_to_one_as_b_vanishes() {
    for l in -1..=5 {
        assert!(e_hr_at_zero(l, 3).unwrap());
        assert!(e_hr_at_zero(l, 7).unwrap());
    }
}

#[test]
fn e_hr_at_weight_one_is_the_bdp_square_over_the_e_factors() {
    // ψ² = 1: B = ψ(℘̄) = ±1
    for (p, a_p) in [(3u64, -1i64), (5, 1), (7, -2)] {
        for b in [1i64, -1] {
            let (num, e1, e0) = e_hr_parts(-1, p, &C::from_int(a_p), &C::from_int(b)).unwrap();
            let expected = bdp_fudge(a_p, &C::from_int(b), p);
            assert_eq!(num, expected);
            assert_eq!(e1, C::from_rational(int(1) - rat(1, p as i64)));
            assert!(e0.is_zero());
            assert!(matches!(
                e_hr_value(-1, p, &C::from_int(a_p), &C::from_int(b)),
                Err(Error::Degenerate(_))
            ));
        }
    }
}

#[test]
fn e_k_vanishes_on_the_self_dual_boundary() {
    for l in -1..=5 {
        assert!(e_k_boundary_zero(l, 3).unwrap());
        assert!(e_k_boundary_zero(l, 11).unwrap());
    }
    // l = −1, ψ = 1: A = 1 so the first factor is 1 − 1
    assert!(e_k_value(-1, 5, &C::one()).unwrap().is_zero());
}

#[test]
fn degenerate_frobenius_value_is_a_shared_zero() {
    // at A = ±p^{l+1}, B² = p^{2l+2}: ℰ₀ = 0 and 𝔢_K = 0, while the numerator of
    // 𝔢_HR is 𝔢_BDP, so 𝔢_HR·𝔢_K = 𝔢_BDP collapses to num·ℰ₁·ℰ₀/(ℰ₁ℰ₀).
    for l in 0..=3i64 {
        let p = 5u64;
        for s in [1i64, -1] {
            let a = C::from_rational(pow(&int(p as i64), l + 1) * int(s));
            let b = a.inverse().unwrap().scale(&pow(&int(p as i64), 2 * l + 2));
            let ap = C::from_int(2);
            let (num, e1, e0) = e_hr_parts(l, p, &ap, &b).unwrap();
            assert!(e0.is_zero());
            assert!(e_k_value(l, p, &a).unwrap().is_zero());
            let k_formal = &e1 * &e0;
            assert_eq!(&num * &k_formal, &e_bdp_value(l, p, &ap, &b).unwrap() * &k_formal);
            assert_eq!(num, e_bdp_value(l, p, &ap, &b).unwrap());
        }
    }
}

#[test]
fn numeric_spot_check_l_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let a = C::from_rational(rat(rng.gen_range(1..10_000), rng.gen_range(1..100)));
        let b = a.inverse().unwrap().scale(&int(81));
        let ap = C::from_int(-1);
        let Ok(h) = e_hr_value(1, 3, &ap, &b) else { continue };
        let k = e_k_value(1, 3, &a).unwrap();
        assert_eq!(&h * &k, e_bdp_value(1, 3, &ap, &b).unwrap());
    }
}

#[test]
fn e_bdp_at_weight_one_trivial_character() {
    let e = e11();
    for p in [3u64, 5, 7, 13] {
        let ap = e.trace_ap(p).unwrap();
        let v = e_bdp_value(-1, p, &C::from_int(ap), &C::one()).unwrap();
        let m = e.count_points(p).unwrap() as i64;
        assert_eq!(v, C::from_rational(rat(m * m, (p * p) as i64)));
    }
}

#[test]
fn e_c_is_one_for_the_maximal_order() {
    assert!(e_c(&RingClassCharacter::trivial(order(11, 1))).is_one());
    assert!(e_c(&RingClassCharacter::trivial(order(23, 1))).is_one());
}

#[test]
fn simple_archimedean_values() {
    let k0 = f_k(0).unwrap();
    assert_eq!((k0.coeff.clone(), k0.pi, k0.sqrt_dk), (int(4), 1, -1));
    let l = lv(11, 11, 11, 1, 1, 1);
    let hr0 = f_hr(&l, 0).unwrap();
    assert_eq!((hr0.coeff.clone(), hr0.pi, hr0.sqrt_dk), (rat(11, 32), -3, -1));
    assert_eq!(sl2_index(11), 12);
    assert_eq!(sl2_index(77), 96);
    assert_eq!(sl2_index(18), 36);
    let w = omega(&l, -1).unwrap();
    assert_eq!((w.coeff.clone(), w.w), (int(1), 1));
    // equal levels: the index ratio is 1 and only h_c, c, w_c and (2l+2)! remain
    let pet = f_pet(&l, 0).unwrap();
    assert_eq!(pet.coeff, rat(2, 16) * rat(1, 2));
}

#[test]
fn assembly_holds_across_levels() {
    let levels = [
        lv(11, 11, 11, 1, 1, 1),
        lv(77, 11, 7, 1, 1, 0),
        lv(23 * 26, 26, 23, 1, 3, 0),
        lv(99, 11, 11, 3, 4, 1),
        lv(15, 15, 15, 1, 2, 2),
    ];
    for level in &levels {
        for l in -1..=5 {
            let chk = verify_assembly(level, l, &BigRational::one()).unwrap();
            assert!(chk.holds, "l = {l}, level = {level:?}: {} vs {}", chk.closed, chk.assembled);
            assert_eq!(chk.pi_degree, 0);
        }
    }
}

#[test]
fn assembly_detects_a_perturbed_petersson_factor() {
    let level = lv(11, 11, 11, 1, 1, 1);
    for l in 0..=5 {
        assert!(!verify_assembly(&level, l, &int(2)).unwrap().holds);
    }
}

#[test]
fn f_infty_at_weight_one_on_the_main_scenario() {
    let s = main_scenario();
    assert_eq!((s.h_k, s.g_k), (1, 1));
    let v = s.f_infty_minus_one().unwrap();
    assert_eq!(v, C::from_rational(f_infty_theorem_value(1, 1)));
    assert_eq!(v, C::from_rational(rat(-1, 2)));
    assert_eq!(ramified_heegner_sign(&s), Some(1));
}

#[test]
fn katz_fudge_examples() {
    assert_eq!(katz_fudge(true, &C::one(), 3, 1), C::from_rational(rat(-1, 3)));
    assert!(katz_fudge(false, &C::one(), 5, 1).is_zero());
    let z = C::zeta_pow(3, 1);
    let expected = (&(&C::one() - &z) * &(&C::one() - &z.scale(&rat(1, 7)))).scale(&rat(-1, 24));
    assert_eq!(katz_fudge(false, &z, 7, 1), expected);
}

#[test]
fn bdp_fudge_matches_point_counts() {
    let curves = [
        [0, -1, 1, -10, -20],
        [0, 0, 1, -1, 0],
        [1, 0, 1, -5, -8],
        [1, 1, 1, -10, -10],
        [0, 1, 1, 0, 0],
        [1, -1, 1, 0, 0],
        [0, 0, 1, 0, -7],
        [1, 0, 0, -1, 0],
        [0, 1, 0, -1, 0],
        [0, -1, 1, 0, 0],
    ];
    let mut done = 0;
    for a in curves {
        let e = WeierstrassModel::new(a).unwrap();
        let mut primes = 0;
        for p in (3u64..200).filter(|&p| is_prime(p)) {
            if primes == 3 {
                break;
            }
            let Ok(ap) = e.trace_ap(p) else { continue };
            let m = e.count_points(p).unwrap() as i64;
            let f = bdp_fudge(ap, &C::one(), p);
            assert_eq!(f.scale(&int((p * p) as i64)), C::from_int(m * m), "{a:?} at {p}");
            primes += 1;
        }
        assert_eq!(primes, 3);
        done += 1;
    }
    assert_eq!(done, 10);
    assert_eq!(bdp_fudge(0, &C::one(), 5), C::from_rational(rat(36, 25)));
}

#[test]
fn lambda_chain_on_the_main_scenario() {
    let s = main_scenario();
    assert_eq!(s.curve.count_points(3).unwrap(), 5);
    let g = lambda_general(&s).unwrap();
    assert!(g.eul_n.is_one());
    assert!(!g.pet_reconstructed);
    assert_eq!(g.katz_fudge, C::from_rational(rat(-1, 3)));
    assert_eq!(g.bdp_fudge, C::from_rational(rat(25, 9)));
    let t = lambda_theorem(&s).unwrap();
    let x = lambda_prime_level(&s).unwrap();
    assert_eq!(g.value, C::from_rational(rat(25, 6)));
    assert_eq!(t, g.value);
    assert_eq!(x, rat(25, 6));
}

#[test]
fn theorem_formula_reduces_to_prime_level_formula() {
    for seed in [1u64, 2, 3] {
        assert!(prime_level_identity(seed).unwrap().holds);
    }
}

#[test]
fn lambda_routes_agree_as_rational_functions() {
    assert!(lambda_route_identity(false, 4).unwrap().holds);
    assert!(lambda_route_identity(true, 4).unwrap().holds);
}

#[test]
fn genus_character_branch() {
    let s = genus_scenario();
    assert!(s.psi.pow(2).is_trivial() && !s.psi.is_trivial());
    assert_eq!((s.h_k, s.g_k), (2, 2));
    assert_eq!(lambda_zero(&s).unwrap(), C::from_rational(rat(1, 16)));
    let pb = s.psi_pbar.as_rational().unwrap();
    assert!(pb == int(1) || pb == int(-1));
    assert!(ramified_heegner_sign(&s).is_some());
    let t = lambda_theorem(&s).unwrap();
    let g = lambda_general(&s).unwrap();
    let sign = ramified_heegner_sign(&s).unwrap();
    assert_eq!(g.value, t.scale(&int(sign)));
}

#[test]
fn cuspidal_branch_and_gating() {
    let s = cubic_scenario();
    assert_eq!(s.psi.char_order(), 3);
    assert!(!s.theorem_applies());
    assert!(matches!(lambda_theorem(&s), Err(Error::Unsupported(_))));
    let l0 = lambda_zero(&s).unwrap();
    let x = s.psi_sq_pbar().inverse().unwrap();
    let den = &(&C::from_int(3) - &x.scale(&int(4))) + &(&x * &x);
    assert_eq!(&l0 * &den, C::from_int(12));
    let g = lambda_general(&s).unwrap();
    assert!(!g.value.is_zero());
    assert!(g.pet_reconstructed);
}

#[test]
fn scenario_validation() {
    let psi = RingClassCharacter::trivial(order(11, 1));
    // p = 2, p | N, p inert
    for p in [2u64, 11, 7] {
        assert!(matches!(FactorScenario::new(e11(), 11, psi.clone(), p), Err(Error::Validation(_))));
    }
    // wrong conductor
    assert!(FactorScenario::new(e11(), 37, psi, 3).is_err());
}

#[test]
fn lambda_general_off_the_theorem_locus() {
    let psi = RingClassCharacter::trivial(order(7, 1));
    let s = FactorScenario::new(e11(), 11, psi, 23).unwrap();
    assert!(!s.theorem_applies());
    let g = lambda_general(&s).unwrap();
    assert!(!g.value.is_zero());
    assert!(g.pet_reconstructed);
}

#[test]
fn predicted_integral_round_trip() {
    let s = main_scenario();
    let prec = 30;
    let lam = lambda_padic(&lambda_general(&s).unwrap().value, 3, prec).unwrap();
    assert_eq!(lam, PadicNumber::from_rational(&rat(25, 6), 3, prec).unwrap());
    let u = elliptic_unit_log(s.psi.order_ctx(), 3, prec).unwrap();
    let ctx = FormalGroupContext::new(&s.curve, 3, prec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..5 {
        let t = PadicNumber::from_rational(&int(rng.gen_range(1..10_000i64) * 3), 3, prec + 10).unwrap();
        let pt = ctx.point_from_t(&t).unwrap();
        let pred = predicted_integral_padic(&ctx, &pt, &lam, &u.log).unwrap();
        assert!(!pred.torsion);
        let rec = ctx.recover_point(&pred.value, &u.log, &lam).unwrap();
        let n = 15;
        assert!(points_agree(&rec.plus, &pt, n) || points_agree(&rec.minus, &pt, n));
    }
    // torsion point predicts 0
    let tor = predicted_integral(&ctx, &CurvePoint::rational(int(5), int(5)), &lam, &u.log).unwrap();
    assert!(tor.torsion && tor.value.is_zero());
}

#[test]
fn predictions_agree_between_lambda_routes() {
    let s = main_scenario();
    let ctx = FormalGroupContext::new(&e37(), 5, 20).unwrap();
    let u = elliptic_unit_log(s.psi.order_ctx(), 5, 20).unwrap();
    let pt = CurvePoint::rational(int(0), int(0));
    let a = lambda_padic(&lambda_general(&s).unwrap().value, 5, 20).unwrap();
    let b = lambda_padic(&lambda_theorem(&s).unwrap(), 5, 20).unwrap();
    let pa = predicted_integral(&ctx, &pt, &a, &u.log).unwrap();
    let pb = predicted_integral(&ctx, &pt, &b, &u.log).unwrap();
    assert_eq!(pa.value, pb.value);
}

#[test]
fn reports_serialize() {
    let chk = verify_euler_identity(2, 5, 3, 1).unwrap();
    assert_eq!(chk.to_json()["holds"], true);
    let lv = main_scenario().level;
    let a = verify_assembly(&lv, 2, &BigRational::one()).unwrap();
    assert_eq!(a.to_json()["pi_degree"], 0);
    let g = lambda_general(&main_scenario()).unwrap();
    assert_eq!(g.to_json()["value"], "25/6");
}

#[test]
fn literal_omega_is_off_by_the_square_of_the_heegner_value() {
    let level = lv(77, 11, 7, 1, 1, 0);
    for l in -1..=5 {
        let ours = omega(&level, l).unwrap();
        let literal = ArchMonomial { w: -1, ..ours.clone() };
        let bdp_literal = f_bdp(&level, l).unwrap().mul(&ours).div(&literal).unwrap();
        let num = f_hr(&level, l).unwrap().mul(&f_k(l).unwrap());
        let quotient = num.div(&bdp_literal.mul(&f_pet(&level, l).unwrap())).unwrap();
        let closed = f_infty_closed(&level, l).unwrap();
        let ratio = quotient.div(&closed).unwrap().normalized(7);
        assert_eq!(ratio, ArchMonomial { w: -2, ..ArchMonomial::rational(BigRational::one()) });
    }
}
