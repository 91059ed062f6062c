//! Exact arithmetic in cyclotomic fields Q(ζ_m).
//!
//! Elements are stored in the power basis 1, ζ, ..., ζ^{φ(m)-1} modulo the
//! m-th cyclotomic polynomial. Binary operations between elements of different
//! orders lift both operands to Q(ζ_lcm).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith::{divisors, gcd_u, lcm_u, totient};
use crate::error::{Error, Result};

type IntPoly = Vec<BigInt>;

fn poly_cache() -> &'static Mutex<HashMap<u64, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low to high) of the m-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u64) -> Arc<IntPoly> {
    if let Some(p) = poly_cache().lock().expect("cache lock").get(&m) {
        return p.clone();
    }
    // Φ_m = (x^m - 1) / ∏_{d | m, d < m} Φ_d
    let mut num: IntPoly = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        num = exact_div_monic(&num, &den);
    }
    let arc = Arc::new(num);
    poly_cache()
        .lock()
        .expect("cache lock")
        .insert(m, arc.clone());
    arc
}

fn exact_div_monic(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let dn = den.len() - 1;
    let mut rem = num.clone();
    let qlen = num.len() - dn;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Element of Q(ζ_m).
#[derive(Clone)]
pub struct CyclotomicElement {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicElement {
    /// Builds an element from power-basis coefficients of arbitrary length,
    /// reducing modulo Φ_m.
    pub fn from_poly(order: u64, poly: Vec<BigRational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CyclotomicElement {
            order,
            coeffs: reduce(order, poly),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CyclotomicElement {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// ζ_m^k for any integer k.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = BigRational::one();
        Self::from_poly(m, poly)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The value as a rational number, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in Q(ζ_n) for a multiple n of the order.
    pub fn lift(&self, n: u64) -> Self {
        assert!(n % self.order == 0, "cannot lift order {} to {}", self.order, n);
        if n == self.order {
            return self.clone();
        }
        let step = (n / self.order) as usize;
        let mut poly = vec![BigRational::zero(); step * (self.coeffs.len() - 1) + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        Self::from_poly(n, poly)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let n = lcm_u(self.order, other.order);
        (self.lift(n), other.lift(n))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    /// The automorphism ζ ↦ ζ^k, gcd(k, m) = 1.
    pub fn galois(&self, k: i64) -> Self {
        let m = self.order;
        let k = k.rem_euclid(m as i64) as u64;
        assert_eq!(gcd_u(k.max(1), m), 1, "galois exponent must be a unit mod m");
        let mut poly = vec![BigRational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            let idx = ((j as u64 * k) % m) as usize;
            poly[idx] += c;
        }
        Self::from_poly(m, poly)
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        self.galois(-1)
    }

    /// Multiplicative inverse, by solving the linear system x·y = 1.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero in Q(zeta_m)".into()));
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()).lift(self.order));
        }
        let n = self.coeffs.len();
        // Column j holds the coordinates of x·ζ^j.
        let mut mat = vec![vec![BigRational::zero(); n + 1]; n];
        for j in 0..n {
            let col = self.mul(&Self::zeta_pow(self.order, j as i64));
            let col = col.lift(self.order);
            for i in 0..n {
                mat[i][j] = col.coeffs[i].clone();
            }
        }
        mat[0][n] = BigRational::one();
        let sol = solve(mat).ok_or_else(|| Error::Internal("singular multiplication matrix".into()))?;
        Ok(CyclotomicElement {
            order: self.order,
            coeffs: sol,
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> BigRational {
        let m = self.order;
        let mut acc = Self::one();
        for k in 1..=m.max(1) {
            if gcd_u(k, m) == 1 {
                acc = &acc * &self.galois(k as i64);
            }
        }
        acc.as_rational().expect("norm is rational")
    }

    /// Complex embedding ζ_m ↦ e^{2πi/m} evaluated in f64.
    pub fn to_c64(&self) -> (f64, f64) {
        let m = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * j as f64 / m;
            let cf = super::rational::to_f64(c);
            re += cf * t.cos();
            im += cf * t.sin();
        }
        (re, im)
    }

    /// If the element is a root of unity ζ_n^k, returns (n, k) with n minimal.
    pub fn root_of_unity_exponent(&self) -> Option<(u64, u64)> {
        let m = if self.order % 2 == 1 { 2 * self.order } else { self.order };
        for k in 0..m {
            if Self::zeta_pow(m, k as i64) == *self {
                let g = gcd_u(k, m);
                let n = m / g;
                return Some((n, k / g));
            }
        }
        None
    }

    /// Coordinates in Q(ζ_n) for n a multiple of the order, as a JSON-friendly value.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn reduce(m: u64, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    debug_assert_eq!(deg as u64, totient(m));
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate().take(deg) {
                if !pj.is_zero() {
                    poly[i - deg + j] -= &c * BigRational::from_integer(pj.clone());
                }
            }
        }
    }
    poly.resize(deg, BigRational::zero());
    poly
}

/// Gaussian elimination on an augmented n×(n+1) matrix.
pub(crate) fn solve(mut mat: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = mat.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, piv);
        let inv = mat[col][col].recip();
        for k in col..=n {
            mat[col][k] = &mat[col][k] * &inv;
        }
        for r in 0..n {
            if r != col && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for k in col..=n {
                    let t = &f * &mat[col][k];
                    mat[r][k] -= t;
                }
            }
        }
    }
    Some(mat.into_iter().map(|row| row[n].clone()).collect())
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicElement {}

impl<'a> Add<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        if self.order == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (a, b) = self.common(rhs);
        let n = a.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CyclotomicElement::from_poly(a.order, prod)
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<CyclotomicElement> for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $f(self, rhs: CyclotomicElement) -> CyclotomicElement {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        -&self
    }
}

impl From<BigRational> for CyclotomicElement {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let zeta = match j {
                0 => String::new(),
                1 => format!("z{}", self.order),
                _ => format!("z{}^{}", self.order, j),
            };
            if j == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{zeta}")?;
            } else {
                write!(f, "{a}*{zeta}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
