//! Bernoulli numbers, Bernoulli polynomials and generalized Bernoulli numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::arith::binomial;
use super::cyclotomic::CyclotomicElement;
use super::dirichlet::DirichletCharacter;
use super::rational::pow;

/// B_0, ..., B_n with the convention B_1 = -1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(m as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// B_k(x) = Σ_j C(k, j) B_j x^{k-j}.
pub fn bernoulli_polynomial(k: usize, x: &BigRational, numbers: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (j, bj) in numbers.iter().enumerate().take(k + 1) {
        acc += BigRational::from_integer(binomial(k as u64, j as u64)) * bj * pow(x, (k - j) as i64);
    }
    acc
}

/// B_{k,χ} = N^{k-1} Σ_{a=1}^{N} χ(a) B_k(a/N).
pub fn generalized_bernoulli(k: usize, chi: &DirichletCharacter) -> CyclotomicElement {
    assert!(k >= 1, "generalized Bernoulli numbers need k >= 1");
    let n = chi.modulus();
    let numbers = bernoulli_numbers(k);
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut acc = CyclotomicElement::zero();
    for a in 1..=n {
        if chi.exponent(a as i64).is_none() {
            continue;
        }
        let x = BigRational::new(BigInt::from(a), BigInt::from(n));
        let bk = bernoulli_polynomial(k, &x, &numbers);
        acc = &acc + &chi.value(a as i64).scale(&bk);
    }
    acc.scale(&pow(&nn, k as i64 - 1))
}

/// L(χ, 1-k) = -B_{k,χ}/k.
pub fn l_value_negative(k: usize, chi: &DirichletCharacter) -> CyclotomicElement {
    generalized_bernoulli(k, chi).scale(&BigRational::new(BigInt::from(-1), BigInt::from(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    #[test]
    fn classical_numbers() {
        let b = bernoulli_numbers(10);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[10], rat(5, 66));
    }

    #[test]
    fn generalized_examples() {
        let triv = DirichletCharacter::trivial(1);
        assert_eq!(generalized_bernoulli(2, &triv), CyclotomicElement::from_rational(rat(1, 6)));
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        assert_eq!(generalized_bernoulli(1, &chi4), CyclotomicElement::from_rational(rat(-1, 2)));
        assert_eq!(l_value_negative(1, &chi4), CyclotomicElement::from_rational(rat(1, 2)));
        let chi5 = DirichletCharacter::kronecker(5).unwrap();
        assert!(generalized_bernoulli(1, &chi5).is_zero());
        let chi7 = DirichletCharacter::kronecker(-7).unwrap();
        assert_eq!(generalized_bernoulli(1, &chi7), CyclotomicElement::from_int(-1));
    }
}
