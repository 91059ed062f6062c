//! p-adic numbers with absolute-precision tracking, the Iwasawa logarithm,
//! exponential, square roots, Teichmüller lifts, the embedding of K into Q_p
//! and the formal group of an elliptic curve.

mod formal;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::arith::{is_prime, primitive_root, sqrt_mod_prime};
use crate::exactalg::CyclotomicElement;
use crate::quadfield::{Ideal, Kind, Order, PrimeIdeal, QuadNum};

pub use formal::{points_agree, FormalGroupContext, FormalLog, Recovery};

/// p^val · unit, known modulo p^prec.
///
/// Precision rules: sums keep the smaller absolute precision; products and
/// quotients keep the smaller relative precision. A value whose unit is 0 is
/// the tracked zero O(p^prec), with val = prec.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    unit: BigInt,
    prec: i64,
}

fn ppow(p: u64, e: i64) -> BigInt {
    num_traits::pow(BigInt::from(p), e.max(0) as usize)
}

fn check_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

impl PadicNumber {
    fn normalize(p: u64, mut val: i64, mut u: BigInt, prec: i64) -> Self {
        let pb = BigInt::from(p);
        if val >= prec {
            return Self::zero(p, prec);
        }
        u = u.mod_floor(&ppow(p, prec - val));
        if u.is_zero() {
            return Self::zero(p, prec);
        }
        while (&u % &pb).is_zero() {
            u /= &pb;
            val += 1;
        }
        if val >= prec {
            return Self::zero(p, prec);
        }
        PadicNumber { p, val, unit: u, prec }
    }

    pub fn zero(p: u64, prec: i64) -> Self {
        PadicNumber {
            p,
            val: prec,
            unit: BigInt::zero(),
            prec,
        }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_int(p, 1, prec)
    }

    pub fn from_int(p: u64, n: i64, prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    pub fn from_bigint(p: u64, n: &BigInt, prec: i64) -> Self {
        Self::normalize(p, 0, n.clone(), prec)
    }

    /// r known to absolute precision `prec`.
    pub fn from_rational(r: &BigRational, p: u64, prec: i64) -> Result<Self> {
        check_prime(p)?;
        if r.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let v = crate::exactalg::rational::valuation(r, p);
        if v >= prec {
            return Ok(Self::zero(p, prec));
        }
        let pb = BigInt::from(p);
        let mut n = r.numer().clone();
        let mut d = r.denom().clone();
        while (&n % &pb).is_zero() {
            n /= &pb;
        }
        while (&d % &pb).is_zero() {
            d /= &pb;
        }
        let m = ppow(p, prec - v);
        let dinv = inverse_mod(&d, &m)?;
        Ok(Self::normalize(p, v, n * dinv, prec))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// v_p; equals the precision for the tracked zero.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Absolute precision N: the value is known modulo p^N.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec - self.val
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// The same value known only modulo p^n (n ≤ current precision).
    pub fn with_precision(&self, n: i64) -> Self {
        let n = n.min(self.prec);
        if self.is_zero() {
            return Self::zero(self.p, n);
        }
        Self::normalize(self.p, self.val, self.unit.clone(), n)
    }

    /// p^val · unit as a rational number.
    pub fn to_rational(&self) -> BigRational {
        let u = BigRational::from_integer(self.unit.clone());
        if self.val >= 0 {
            u * BigRational::from_integer(ppow(self.p, self.val))
        } else {
            u / BigRational::from_integer(ppow(self.p, -self.val))
        }
    }

    /// Base-p digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let mut u = self.unit.clone();
        let pb = BigInt::from(self.p);
        let mut out = Vec::new();
        for _ in 0..self.relative_precision().max(0) {
            let (q, r) = u.div_mod_floor(&pb);
            out.push(r.to_u64().expect("digit"));
            u = q;
        }
        out
    }

    fn same_prime(&self, o: &Self) {
        assert_eq!(self.p, o.p, "mixing Q_{} and Q_{}", self.p, o.p);
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_prime(o);
        let prec = self.prec.min(o.prec);
        if self.is_zero() {
            return o.with_precision(prec);
        }
        if o.is_zero() {
            return self.with_precision(prec);
        }
        let v = self.val.min(o.val);
        let a = &self.unit * ppow(self.p, self.val - v);
        let b = &o.unit * ppow(self.p, o.val - v);
        Self::normalize(self.p, v, a + b, prec)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::normalize(self.p, self.val, -&self.unit, self.prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_prime(o);
        let prec = (self.prec + o.val).min(o.prec + self.val);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p, prec);
        }
        Self::normalize(self.p, self.val + o.val, &self.unit * &o.unit, prec)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain(format!("inverse of O({}^{})", self.p, self.prec)));
        }
        let rel = self.relative_precision();
        let u = inverse_mod(&self.unit, &ppow(self.p, rel))?;
        Ok(Self::normalize(self.p, -self.val, u, rel - self.val))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.p, base.prec.max(0) + e.unsigned_abs() as i64 * base.val.abs() + 1);
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

    pub fn scale_int(&self, n: i64) -> Self {
        let c = Self::from_int(self.p, n, self.prec + 64);
        self.mul(&c)
    }

    /// ω(u) for a unit u: the (p−1)-th root of unity congruent to u mod p.
    pub fn teichmuller(&self) -> Result<Self> {
        if self.is_zero() || self.val != 0 {
            return Err(Error::Domain("Teichmüller lift needs a unit".into()));
        }
        let n = self.prec;
        let m = ppow(self.p, n);
        let mut x = self.unit.mod_floor(&BigInt::from(self.p));
        for _ in 0..n {
            x = x.modpow(&BigInt::from(self.p), &m);
        }
        Ok(Self::normalize(self.p, 0, x, n))
    }

    /// Iwasawa logarithm: log(p) = 0, log(ω) = 0 for roots of unity.
    /// The result is known to the relative precision of the input.
    pub fn log(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("log of zero".into()));
        }
        let p = self.p;
        let n = self.relative_precision();
        // u^{p−1} = 1 + z with v(z) ≥ 1
        let u = Self::normalize(p, 0, self.unit.clone(), n);
        let up = u.pow(p as i64 - 1)?.with_precision(n);
        let z = up.sub(&Self::one(p, n));
        let l = log1p_series(&z, n)?;
        let inv = Self::from_int(p, p as i64 - 1, n + 1).inverse()?;
        Ok(l.mul(&inv).with_precision(n))
    }

    /// exp(x) for v(x) ≥ 1, known to the absolute precision of x.
    pub fn exp(&self) -> Result<Self> {
        if self.val < 1 {
            return Err(Error::Domain(format!("exp needs v(x) ≥ 1, got {}", self.val)));
        }
        let p = self.p;
        let n = self.prec;
        if self.is_zero() {
            return Ok(Self::one(p, n));
        }
        // v(x^k/k!) ≥ k·v − (k−1)/(p−1) increases in k; sum up to the first k past n
        let v = self.val;
        let pm = p as i64 - 1;
        let mut last = 1i64;
        while last * v - (last - 1) / pm < n {
            last += 1;
        }
        let guard = (last - 1) / pm + 2;
        let x = Self::normalize(p, v, self.unit.clone(), n + guard);
        let mut term = Self::one(p, n + guard);
        let mut acc = term.clone();
        for k in 1..=last {
            let inv_k = Self::from_int(p, k, n + 2 * guard).inverse()?;
            term = term.mul(&x).mul(&inv_k);
            acc = acc.add(&term);
        }
        Ok(acc.with_precision(n))
    }

    /// Both square roots ±r, or an error for odd valuation or a non-residue unit.
    pub fn sqrt(&self) -> Result<(Self, Self)> {
        let p = self.p;
        if self.is_zero() {
            let z = Self::zero(p, self.prec.div_euclid(2));
            return Ok((z.clone(), z));
        }
        if self.val % 2 != 0 {
            return Err(Error::NoSquareRoot(format!("odd valuation {}", self.val)));
        }
        let rel = self.relative_precision();
        let u0 = self.unit.mod_floor(&BigInt::from(p)).to_i64().expect("digit");
        let r0 = sqrt_mod_prime(u0, p)
            .ok_or_else(|| Error::NoSquareRoot(format!("{u0} is not a square mod {p}")))?;
        // Newton: r ← (r + u/r)/2
        let u = Self::normalize(p, 0, self.unit.clone(), rel);
        let half = Self::from_int(p, 2, rel).inverse()?;
        let mut r = Self::from_int(p, r0 as i64, rel);
        let mut k = 1;
        while k < rel {
            r = r.add(&u.div(&r)?).mul(&half).with_precision(rel);
            k *= 2;
        }
        r = r.add(&u.div(&r)?).mul(&half).with_precision(rel);
        let root = Self::normalize(p, self.val / 2, r.unit.clone(), self.val / 2 + rel);
        Ok((root.clone(), root.neg()))
    }

    /// "a₀ + a₁·p + … + O(p^N)".
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (i, d) in self.digits().iter().enumerate() {
            if *d == 0 {
                continue;
            }
            let e = self.val + i as i64;
            parts.push(match e {
                0 => format!("{d}"),
                1 if *d == 1 => format!("{}", self.p),
                1 => format!("{d}*{}", self.p),
                _ if *d == 1 => format!("{}^{e}", self.p),
                _ => format!("{d}*{}^{e}", self.p),
            });
        }
        parts.push(format!("O({}^{})", self.p, self.prec));
        parts.join(" + ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "val": self.val,
            "digits": self.digits(),
            "prec": self.prec,
        })
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl crate::elliptic::FieldOps for PadicNumber {
    fn from_int(&self, n: &BigInt) -> Self {
        let prec = self.prec + 2 * self.val.abs() + 2;
        PadicNumber::from_bigint(self.p, n, prec)
    }
    fn add(&self, o: &Self) -> Self {
        PadicNumber::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        PadicNumber::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        PadicNumber::mul(self, o)
    }
    fn neg(&self) -> Self {
        PadicNumber::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        self.inverse()
    }
    fn is_zero(&self) -> bool {
        PadicNumber::is_zero(self)
    }
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::Domain(format!("{a} is not invertible modulo {m}")));
    }
    Ok(e.x.mod_floor(m))
}

/// log(1 + z) = Σ (−1)^{k+1} z^k/k for v(z) ≥ 1, to absolute precision n.
fn log1p_series(z: &PadicNumber, n: i64) -> Result<PadicNumber> {
    let p = z.p;
    if z.is_zero() {
        return Ok(PadicNumber::zero(p, n));
    }
    if z.val < 1 {
        return Err(Error::Domain("log series needs v(z) ≥ 1".into()));
    }
    // k·v(z) − ⌊log_p k⌋ increases in k; sum up to the first k past n
    let v = z.val;
    let logp = |k: i64| {
        let (mut e, mut q) = (0i64, p as i64);
        while q <= k {
            e += 1;
            q *= p as i64;
        }
        e
    };
    let mut last = 1i64;
    while last * v - logp(last) < n {
        last += 1;
    }
    let guard = logp(last) + 2;
    let zz = PadicNumber::normalize(p, v, z.unit.clone(), n + guard);
    let mut acc = PadicNumber::zero(p, n + guard);
    let mut power = zz.clone();
    for k in 1..=last {
        let inv_k = PadicNumber::from_rational(&BigRational::new(1.into(), k.into()), p, n + 2 * guard)?;
        let term = power.mul(&inv_k);
        acc = if k % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        power = power.mul(&zz);
    }
    Ok(acc.with_precision(n))
}

/// Image of a cyclotomic element under ζ_m ↦ ω(g)^{(p−1)/m}, g the least
/// primitive root mod p. Requires m | p − 1.
pub fn embed_cyclotomic(x: &CyclotomicElement, p: u64, prec: i64) -> Result<PadicNumber> {
    check_prime(p)?;
    let m = x.order();
    if (p - 1) % m != 0 {
        return Err(Error::Unsupported(format!("ζ_{m} does not lie in Q_{p}")));
    }
    let work = prec + 8;
    let g = PadicNumber::from_int(p, primitive_root(p) as i64, work).teichmuller()?;
    let zeta = g.pow(((p - 1) / m) as i64)?.with_precision(work);
    let mut acc = PadicNumber::zero(p, work);
    let mut z = PadicNumber::one(p, work);
    for c in x.coeffs() {
        if !c.is_zero() {
            acc = acc.add(&z.mul(&PadicNumber::from_rational(c, p, work + 8)?));
        }
        z = z.mul(&zeta).with_precision(work);
    }
    Ok(acc.with_precision(prec))
}

/// √−D_K in Q_p: the Hensel root congruent to the distinguished residue mod p.
fn sqrt_disc(order: &Order, p: u64, prec: i64) -> Result<PadicNumber> {
    let r1 = order.embedding_root(p, 1)? as u64;
    let (a, b) = PadicNumber::from_int(p, order.field().disc(), prec).sqrt()?;
    Ok(if a.digits().first().copied() == Some(r1 % p) { a } else { b })
}

/// x = a + b√−D_K in Q_p, with √−D_K sent to the root fixed by the distinguished ℘ above p.
pub fn embed_k(order: &Order, p: u64, x: &QuadNum, prec: i64) -> Result<PadicNumber> {
    check_prime(p)?;
    let s = order.splitting(p)?;
    if s.kind != Kind::Split {
        return Err(Error::Domain(format!("{p} is {} in K, not split", s.kind)));
    }
    let v = |r: &BigRational| if r.is_zero() { 0 } else { crate::exactalg::rational::valuation(r, p).unsigned_abs() as i64 };
    let guard = 4 + v(&x.x) + v(&x.y);
    let work = prec + guard;
    let root = sqrt_disc(order, p, work)?;
    let a = PadicNumber::from_rational(&x.x, p, work)?;
    let b = PadicNumber::from_rational(&x.y, p, work)?;
    Ok(a.add(&b.mul(&root)).with_precision(prec))
}

/// Elliptic unit in the class-number-one case.
#[derive(Clone, Debug)]
pub struct EllipticUnit {
    /// Generator γ of ℘ with (γ) = ℘.
    pub generator: QuadNum,
    pub embedded: PadicNumber,
    pub log: PadicNumber,
}

/// u = γ with (γ) = ℘ and its Iwasawa logarithm under the distinguished embedding.
pub fn elliptic_unit_log(order: &Order, p: u64, prec: i64) -> Result<EllipticUnit> {
    if order.conductor() != 1 || order.class_number() != 1 {
        return Err(Error::Unsupported(format!(
            "elliptic units are implemented for class number one (h = {})",
            order.class_number()
        )));
    }
    let g = order.principal_generator(&Ideal::prime(PrimeIdeal::Split { q: p, conj: false }))?;
    let e = embed_k(order, p, &g, prec + 2)?;
    let log = e.log()?;
    Ok(EllipticUnit {
        generator: g,
        embedded: e.with_precision(prec),
        log: log.with_precision(prec - e.valuation()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    #[test]
    fn arithmetic_and_precision() {
        let a = PadicNumber::from_rational(&rat(1, 3), 5, 10).unwrap();
        let b = a.scale_int(3);
        assert_eq!(b, PadicNumber::one(5, 10));
        let x = PadicNumber::from_rational(&rat(25, 2), 5, 10).unwrap();
        assert_eq!(x.valuation(), 2);
        let y = x.inverse().unwrap();
        assert_eq!(y.valuation(), -2);
        assert_eq!(y.relative_precision(), 8);
        assert_eq!(y.to_rational() * rat(25, 2), int(1) + (y.to_rational() * rat(25, 2) - int(1)));
    }

    #[test]
    fn render_and_digits() {
        let m2 = PadicNumber::from_int(5, -2, 3);
        assert_eq!(m2.digits(), vec![3, 4, 4]);
        assert_eq!(m2.render(), "3 + 4*5 + 4*5^2 + O(5^3)");
        assert_eq!(PadicNumber::zero(3, 4).render(), "O(3^4)");
    }
}
