use proptest::prelude::*;
use starkrankin::exactalg::arith::{factorize, is_fundamental_discriminant};
use starkrankin::quadfield::{class_group, reduced_forms, ImagQuadField, QuadForm};

/// Number of integral ideals of norm n, counted as representations of n by
/// all reduced forms divided by the number of units.
fn ideal_count_by_forms(disc: i64, n: i64) -> usize {
    let w = match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let bound = (4 * n) as f64 / (-disc) as f64;
    let ymax = bound.sqrt() as i64 + 1;
    let mut reps = 0;
    for f in reduced_forms(disc) {
        let xmax = ((4 * f.c * n) as f64 / (-disc) as f64).sqrt() as i64 + 1;
        for x in -xmax..=xmax {
            for y in -ymax.max(xmax)..=ymax.max(xmax) {
                if f.eval(x, y) == n as i128 {
                    reps += 1;
                }
            }
        }
    }
    reps / w
}

#[test]
fn genus_number_matches_prime_divisor_count() {
    for d in 7i64..=500 {
        if !is_fundamental_discriminant(-d) {
            continue;
        }
        let g = class_group(-d).unwrap();
        let t = factorize(d as u64).len() as u32;
        assert_eq!(g.genus_number(), 1 << (t - 1), "D = {d}");
    }
}

#[test]
fn ideal_counts_match_form_representations() {
    for d in [7u64, 11, 23, 47] {
        let o = ImagQuadField::new(d).unwrap().order(1).unwrap();
        for n in 1..=200u64 {
            let got = o.ideals_of_norm(n).unwrap().len();
            assert_eq!(got, ideal_count_by_forms(-(d as i64), n as i64), "D = {d}, n = {n}");
        }
    }
}

#[test]
fn class_numbers_small() {
    assert_eq!(class_group(-23).unwrap().class_number(), 3);
    assert!(class_group(-23).unwrap().is_cyclic());
    assert_eq!(class_group(-7).unwrap().class_number(), 1);
    assert_eq!(class_group(-4).unwrap().class_number(), 1);
}

#[test]
fn composition_tables_are_abelian_groups() {
    let mut seen = 0;
    for d in 3i64..=400 {
        if !is_fundamental_discriminant(-d) {
            continue;
        }
        let g = class_group(-d).unwrap();
        if g.class_number() > 12 {
            continue;
        }
        seen += 1;
        let e = QuadForm::identity(-d);
        let els = g.elements();
        for a in els {
            assert_eq!(a.compose(&e), *a);
            for b in els {
                let ab = a.compose(b);
                assert_eq!(ab, b.compose(a));
                assert!(els.contains(&ab));
                for c in els {
                    assert_eq!(ab.compose(c), a.compose(&b.compose(c)));
                }
            }
        }
    }
    assert!(seen > 50);
}

#[test]
fn ring_class_numbers() {
    // h(O_c) = h_K c ∏_{q | c}(1 − χ_K(q)/q) / [O_K^× : O_c^×]
    let k = ImagQuadField::new(7).unwrap();
    assert_eq!(k.order(3).unwrap().class_number(), 4);
    assert_eq!(k.order(2).unwrap().class_number(), 1);
    let k = ImagQuadField::new(11).unwrap();
    assert_eq!(k.order(5).unwrap().class_number(), 4);
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn ideal_counts_are_multiplicative(m in 1u64..60, n in 1u64..60, di in 0usize..4) {
        prop_assume!(gcd(m, n) == 1);
        let d = [7u64, 11, 23, 47][di];
        let o = ImagQuadField::new(d).unwrap().order(1).unwrap();
        let a = o.ideals_of_norm(m).unwrap().len();
        let b = o.ideals_of_norm(n).unwrap().len();
        prop_assert_eq!(o.ideals_of_norm(m * n).unwrap().len(), a * b);
    }

    #[test]
    fn ideal_class_is_multiplicative(n1 in 1u64..80, n2 in 1u64..80, di in 0usize..3) {
        let d = [23u64, 47, 71][di];
        let o = ImagQuadField::new(d).unwrap().order(1).unwrap();
        for a in o.ideals_of_norm(n1).unwrap() {
            for b in o.ideals_of_norm(n2).unwrap() {
                let lhs = o.ideal_class(&a.mul(&b)).unwrap();
                let rhs = o.ideal_class(&a).unwrap().compose(&o.ideal_class(&b).unwrap());
                prop_assert_eq!(lhs, rhs);
                // 𝔞·𝔞̄ = (N𝔞) is principal
                let prod = o.ideal_class(&a.mul(&a.conj())).unwrap();
                prop_assert_eq!(prod, QuadForm::identity(-(d as i64)));
            }
        }
    }

    #[test]
    fn generators_have_the_right_norm(q in 2u64..60, e in 1u32..4) {
        prop_assume!(starkrankin::exactalg::arith::is_prime(q));
        let o = ImagQuadField::new(11).unwrap().order(1).unwrap();
        for p in o.primes_above(q).unwrap() {
            let a = starkrankin::quadfield::Ideal::prime_power(p, e);
            let g = o.principal_generator(&a).unwrap();
            prop_assert_eq!(g.norm(), num_rational::BigRational::from_integer(a.norm().into()));
            if let starkrankin::quadfield::PrimeIdeal::Split { .. } = p {
                prop_assert!(!g.is_rational());
                let gc = o.principal_generator(&a.conj()).unwrap();
                prop_assert!(gc == g.conj() || gc == g.conj().neg());
            }
        }
    }
}
