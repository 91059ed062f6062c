//! Elements x + y√d of an imaginary quadratic field, exact over Q.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::rational::{int, rat};
use crate::exactalg::{CyclotomicElement, DirichletCharacter};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadNum {
    /// The radicand d < 0 (d = −D_K).
    pub d: i64,
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadNum {
    pub fn new(d: i64, x: BigRational, y: BigRational) -> Self {
        QuadNum { d, x, y }
    }

    pub fn from_rational(d: i64, x: BigRational) -> Self {
        QuadNum::new(d, x, BigRational::zero())
    }

    pub fn from_int(d: i64, n: i64) -> Self {
        QuadNum::from_rational(d, int(n))
    }

    /// (x + y√d)/2 with integer x, y.
    pub fn half(d: i64, x: i64, y: i64) -> Self {
        QuadNum::new(d, rat(x, 2), rat(y, 2))
    }

    /// √d itself.
    pub fn sqrt_d(d: i64) -> Self {
        QuadNum::new(d, BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadNum::new(self.d, self.x.clone(), -&self.y)
    }

    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - &self.y * &self.y * int(self.d)
    }

    pub fn trace(&self) -> BigRational {
        &self.x * int(2)
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadNum::new(self.d, &self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadNum::new(self.d, &self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Self {
        QuadNum::new(self.d, -&self.x, -&self.y)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let x = &self.x * &o.x + &self.y * &o.y * int(self.d);
        let y = &self.x * &o.y + &self.y * &o.x;
        QuadNum::new(self.d, x, y)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QuadNum::new(self.d, &self.x * r, &self.y * r)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = QuadNum::from_int(self.d, 1);
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Image in Q(ζ_D) with √−D = Σ_a χ_{−D}(a) ζ_D^a (a Gauss sum, for −D fundamental).
    pub fn to_cyclotomic(&self) -> Result<CyclotomicElement> {
        let chi = DirichletCharacter::kronecker(self.d)?;
        let m = chi.modulus();
        let mut s = CyclotomicElement::zero();
        for a in 1..m {
            let v = chi.value_int(a as i64);
            if v != 0 {
                s = &s + &CyclotomicElement::zeta_pow(m, a as i64).scale_int(&v.into());
            }
        }
        Ok(&CyclotomicElement::from_rational(self.x.clone()) + &s.scale(&self.y))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let x = crate::exactalg::rational::to_f64(&self.x);
        let y = crate::exactalg::rational::to_f64(&self.y);
        (x, y * ((-self.d) as f64).sqrt())
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
    }
}
