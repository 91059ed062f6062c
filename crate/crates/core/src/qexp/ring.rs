//! Coefficient rings usable in q-expansions.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactalg::CyclotomicElement;

/// Exact commutative ring operations needed by the q-series calculus.
pub trait Coeff: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, n: &BigInt) -> Self;
    /// Multiplication by a rational; None when the ring cannot divide by its denominator.
    fn mul_rational(&self, r: &BigRational) -> Option<Self>;
    fn to_json(&self) -> serde_json::Value;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, n: &BigInt) -> Self {
        self * BigRational::from_integer(n.clone())
    }
    fn mul_rational(&self, r: &BigRational) -> Option<Self> {
        Some(self * r)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Coeff for CyclotomicElement {
    fn zero() -> Self {
        CyclotomicElement::zero()
    }
    fn one() -> Self {
        CyclotomicElement::one()
    }
    fn is_zero(&self) -> bool {
        CyclotomicElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, n: &BigInt) -> Self {
        self.scale_int(n)
    }
    fn mul_rational(&self, r: &BigRational) -> Option<Self> {
        Some(self.scale(r))
    }
    fn to_json(&self) -> serde_json::Value {
        match self.as_rational() {
            Some(r) => serde_json::Value::String(r.to_string()),
            None => CyclotomicElement::to_json(self),
        }
    }
}
