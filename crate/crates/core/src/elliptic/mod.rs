//! Elliptic curves in Weierstrass form: reduction data, point counts over F_p
//! and the chord-tangent group law over any field implementing [`FieldOps`].

use std::fmt::{self, Debug};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::arith::{factorize, is_prime, legendre, prime_divisors};

pub const MAX_COUNT_PRIME: u64 = 100_000;

/// Field arithmetic used by the group law. Constants are produced from an
/// existing element so that contexts such as the prime p travel with values.
pub trait FieldOps: Clone + PartialEq + Debug {
    fn from_int(&self, n: &BigInt) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn is_zero(&self) -> bool;
}

impl FieldOps for BigRational {
    fn from_int(&self, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
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
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::Domain("division by zero in Q".into()));
        }
        Ok(self.recip())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Residue class modulo a prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp {
            v: v.rem_euclid(p as i64) as u64,
            p,
        }
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.v, self.p)
    }
}

impl FieldOps for Fp {
    fn from_int(&self, n: &BigInt) -> Self {
        let r = (n % BigInt::from(self.p)).to_i64().expect("residue fits");
        Fp::new(r, self.p)
    }
    fn add(&self, o: &Self) -> Self {
        Fp {
            v: ((self.v as u128 + o.v as u128) % self.p as u128) as u64,
            p: self.p,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        Fp {
            v: ((self.v as u128 * o.v as u128) % self.p as u128) as u64,
            p: self.p,
        }
    }
    fn neg(&self) -> Self {
        Fp {
            v: (self.p - self.v) % self.p,
            p: self.p,
        }
    }
    fn inv(&self) -> Result<Self> {
        if self.v == 0 {
            return Err(Error::Domain(format!("division by zero in F_{}", self.p)));
        }
        Ok(Fp {
            v: crate::exactalg::arith::mod_pow(self.v, self.p - 2, self.p),
            p: self.p,
        })
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
}

/// Reduction type at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

/// y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub a: [i64; 5],
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

impl WeierstrassModel {
    pub fn new(a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(BigInt::from);
        let k = |n: i64| BigInt::from(n);
        let b2 = &a1 * &a1 + k(4) * &a2;
        let b4 = k(2) * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + k(4) * &a6;
        let b8 = &a1 * &a1 * &a6 + k(4) * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let c4 = &b2 * &b2 - k(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + k(36) * &b2 * &b4 - k(216) * &b6;
        let disc = -(&b2 * &b2 * &b8) - k(8) * &b4 * &b4 * &b4 - k(27) * &b6 * &b6 + k(9) * &b2 * &b4 * &b6;
        if disc.is_zero() {
            return Err(Error::Domain(format!("{a:?} is singular (Δ = 0)")));
        }
        Ok(WeierstrassModel {
            a,
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
        })
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        BigInt::from(self.a[i])
    }

    fn disc_valuation(&self, q: u64) -> u32 {
        big_valuation(&self.disc, q)
    }

    /// Reduction type of this model at q.
    pub fn reduction(&self, q: u64) -> Result<Reduction> {
        if self.disc_valuation(q) == 0 {
            return Ok(Reduction::Good);
        }
        Ok(match self.bad_prime_aq(q)? {
            1 => Reduction::SplitMultiplicative,
            -1 => Reduction::NonsplitMultiplicative,
            _ => Reduction::Additive,
        })
    }

    /// Rejects a model whose bad primes disagree with the conductor N, or which
    /// fails the valuation test for minimality at some prime.
    pub fn check_conductor(&self, n: u64) -> Result<()> {
        let dp: Vec<u64> = prime_divisors_big(&self.disc);
        let np = prime_divisors(n);
        if dp != np {
            return Err(Error::Validation(format!(
                "Δ = {} has prime support {dp:?}, conductor {n} has {np:?}; the model is not minimal or the conductor is wrong",
                self.disc
            )));
        }
        for (q, e) in factorize(n) {
            let multiplicative = big_valuation(&self.c4, q) == 0;
            if multiplicative != (e == 1) {
                return Err(Error::Validation(format!(
                    "v_{q}(N) = {e} does not match the reduction type at {q}"
                )));
            }
            if q >= 5 && self.disc_valuation(q) >= 12 && big_valuation(&self.c4, q) >= 4 {
                return Err(Error::Validation(format!("model is not minimal at {q}")));
            }
        }
        Ok(())
    }

    /// |E(F_p)| by enumeration, for good p ≤ 10⁵.
    pub fn count_points(&self, p: u64) -> Result<u64> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if p > MAX_COUNT_PRIME {
            return Err(Error::Resource(format!("point counting capped at p ≤ {MAX_COUNT_PRIME}, got {p}")));
        }
        if self.disc_valuation(p) > 0 {
            return Err(Error::Domain(format!("{p} divides Δ = {}", self.disc)));
        }
        Ok(self.count_points_unchecked(p))
    }

    /// Counts affine solutions mod p plus the point at infinity, singular or not.
    fn count_points_unchecked(&self, p: u64) -> u64 {
        let r = |n: &BigInt| {
            let m = n % BigInt::from(p);
            let m = if m.is_negative() { m + BigInt::from(p) } else { m };
            m.to_u64().expect("residue")
        };
        let mut count = 1u64;
        if p == 2 {
            let a: Vec<u64> = self.a.iter().map(|&x| x.rem_euclid(2) as u64).collect();
            for x in 0..2u64 {
                for y in 0..2u64 {
                    let lhs = y * y + a[0] * x * y + a[2] * y;
                    let rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
                    if (lhs + rhs) % 2 == 0 {
                        count += 1;
                    }
                }
            }
            return count;
        }
        // (2y + a1 x + a3)² = 4x³ + b2 x² + 2 b4 x + b6
        let (b2, b4, b6) = (r(&self.b2), r(&self.b4), r(&self.b6));
        let pp = p as u128;
        for x in 0..p {
            let xx = x as u128;
            let v = (4 * xx * xx % pp * xx + b2 as u128 * xx % pp * xx + 2 * b4 as u128 * xx + b6 as u128) % pp;
            count += (1 + legendre(v as i64, p)) as u64;
        }
        count
    }

    /// a_p = p + 1 − |E(F_p)|, with the Hasse bound asserted.
    pub fn trace_ap(&self, p: u64) -> Result<i64> {
        let n = self.count_points(p)?;
        let a = p as i64 + 1 - n as i64;
        if (a * a) as u64 > 4 * p {
            return Err(Error::Internal(format!("|a_{p}| = {} violates the Hasse bound", a.abs())));
        }
        Ok(a)
    }

    /// a_q at a prime of bad reduction: 1 split multiplicative, −1 nonsplit, 0 additive.
    pub fn bad_prime_aq(&self, q: u64) -> Result<i64> {
        if self.disc_valuation(q) == 0 {
            return Err(Error::Domain(format!("{q} is a prime of good reduction")));
        }
        if q > MAX_COUNT_PRIME {
            return Err(Error::Resource(format!("singular point search capped at {MAX_COUNT_PRIME}")));
        }
        let t = Fp::new(0, q);
        let a: Vec<Fp> = (0..5).map(|i| t.from_int(&self.coeff(i))).collect();
        let (a1, a2, a3, a4) = (a[0], a[1], a[2], a[3]);
        // singular point: F = F_x = F_y = 0
        let sing = (0..q).find_map(|x| {
            let xf = Fp::new(x as i64, q);
            // F_y = 2y + a1 x + a3 = 0
            (0..q).map(|y| Fp::new(y as i64, q)).find(|yf| {
                let fy = yf.add(yf).add(&a1.mul(&xf)).add(&a3);
                let fx = a1.mul(yf).sub(&xf.mul(&xf).mul(&Fp::new(3, q))).sub(&a2.mul(&xf).mul(&Fp::new(2, q))).sub(&a4);
                fy.is_zero() && fx.is_zero() && on_curve_fp(&a, &xf, yf)
            })
            .map(|y| (xf, y))
        });
        let (x0, _) = sing.ok_or_else(|| Error::Internal(format!("no singular point mod {q}")))?;
        // tangent slopes m: m² + a1 m − (3x0 + a2) = 0
        let c0 = Fp::new(3, q).mul(&x0).add(&a2).neg();
        let roots: Vec<u64> = (0..q)
            .filter(|&m| {
                let mf = Fp::new(m as i64, q);
                mf.mul(&mf).add(&a1.mul(&mf)).add(&c0).is_zero()
            })
            .collect();
        let double = if q == 2 {
            a1.is_zero()
        } else {
            a1.mul(&a1).sub(&Fp::new(4, q).mul(&c0)).is_zero()
        };
        Ok(if double {
            0
        } else if roots.is_empty() {
            -1
        } else {
            1
        })
    }

    /// |E(F_q)| counted with the singular point, for comparison at bad q.
    pub fn count_points_any(&self, q: u64) -> u64 {
        self.count_points_unchecked(q)
    }

    /// Every point of E(F_p), p ≤ 10⁵ good.
    pub fn points_fp(&self, p: u64) -> Result<Vec<CurvePoint<Fp>>> {
        self.count_points(p)?;
        let t = Fp::new(0, p);
        let a: Vec<Fp> = (0..5).map(|i| t.from_int(&self.coeff(i))).collect();
        let mut out = vec![CurvePoint::Infinity];
        for x in 0..p {
            let xf = Fp::new(x as i64, p);
            for y in 0..p {
                let yf = Fp::new(y as i64, p);
                if on_curve_fp(&a, &xf, &yf) {
                    out.push(CurvePoint::Affine { x: xf, y: yf });
                }
            }
        }
        Ok(out)
    }

    fn coeffs_in<T: FieldOps>(&self, t: &T) -> [T; 5] {
        [0, 1, 2, 3, 4].map(|i| t.from_int(&self.coeff(i)))
    }

    /// y² + a1xy + a3y − (x³ + a2x² + a4x + a6).
    pub fn equation<T: FieldOps>(&self, x: &T, y: &T) -> T {
        let [a1, a2, a3, a4, a6] = self.coeffs_in(x);
        let lhs = y.mul(y).add(&a1.mul(x).mul(y)).add(&a3.mul(y));
        let rhs = x.mul(x).mul(x).add(&a2.mul(x).mul(x)).add(&a4.mul(x)).add(&a6);
        lhs.sub(&rhs)
    }

    pub fn on_curve<T: FieldOps>(&self, p: &CurvePoint<T>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => self.equation(x, y).is_zero(),
        }
    }

    pub fn neg<T: FieldOps>(&self, p: &CurvePoint<T>) -> CurvePoint<T> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let [a1, _, a3, _, _] = self.coeffs_in(x);
                CurvePoint::Affine {
                    x: x.clone(),
                    y: y.neg().sub(&a1.mul(x)).sub(&a3),
                }
            }
        }
    }

    fn check<T: FieldOps>(&self, p: &CurvePoint<T>) -> Result<()> {
        if self.on_curve(p) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{p:?} is not on the curve {:?}", self.a)))
        }
    }

    /// Chord-tangent addition; the inputs are checked to lie on the curve.
    pub fn add<T: FieldOps>(&self, p: &CurvePoint<T>, q: &CurvePoint<T>) -> Result<CurvePoint<T>> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn add_unchecked<T: FieldOps>(&self, p: &CurvePoint<T>, q: &CurvePoint<T>) -> CurvePoint<T> {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = self.coeffs_in(x1);
        let two = x1.from_int(&2.into());
        let three = x1.from_int(&3.into());
        let (lambda, nu) = if x1.sub(x2).is_zero() {
            // P = −Q, or a point of order two doubled
            let denom = two.mul(y1).add(&a1.mul(x1)).add(&a3);
            if y1.add(y2).add(&a1.mul(x2)).add(&a3).is_zero() || denom.is_zero() {
                return CurvePoint::Infinity;
            }
            let dinv = denom.inv().expect("nonzero");
            let num = three.mul(x1).mul(x1).add(&two.mul(&a2).mul(x1)).add(&a4).sub(&a1.mul(y1));
            let lambda = num.mul(&dinv);
            let nu = x1.mul(x1).mul(x1).neg().add(&a4.mul(x1)).add(&two.mul(&a6)).sub(&a3.mul(y1)).mul(&dinv);
            (lambda, nu)
        } else {
            let dinv = x2.sub(x1).inv().expect("nonzero");
            let lambda = y2.sub(y1).mul(&dinv);
            let nu = y1.mul(x2).sub(&y2.mul(x1)).mul(&dinv);
            (lambda, nu)
        };
        let x3 = lambda.mul(&lambda).add(&a1.mul(&lambda)).sub(&a2).sub(x1).sub(x2);
        let y3 = lambda.add(&a1).mul(&x3).neg().sub(&nu).sub(&a3);
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// n·P by double-and-add; negative n uses −P.
    pub fn mul<T: FieldOps>(&self, p: &CurvePoint<T>, n: i64) -> Result<CurvePoint<T>> {
        self.check(p)?;
        Ok(self.mul_unchecked(p, n))
    }

    pub fn mul_unchecked<T: FieldOps>(&self, p: &CurvePoint<T>, n: i64) -> CurvePoint<T> {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        acc
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.a)
    }
}

fn on_curve_fp(a: &[Fp], x: &Fp, y: &Fp) -> bool {
    let lhs = y.mul(y).add(&a[0].mul(x).mul(y)).add(&a[2].mul(y));
    let rhs = x.mul(x).mul(x).add(&a[1].mul(x).mul(x)).add(&a[3].mul(x)).add(&a[4]);
    lhs == rhs
}

/// A point on a Weierstrass curve over a field T.
#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint<T> {
    Infinity,
    Affine { x: T, y: T },
}

impl<T> CurvePoint<T> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

impl CurvePoint<BigRational> {
    pub fn rational(x: BigRational, y: BigRational) -> Self {
        CurvePoint::Affine { x, y }
    }

    /// Reduction modulo p, or None when p divides a denominator (the point
    /// reduces to O).
    pub fn reduce(&self, p: u64) -> Option<CurvePoint<Fp>> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => {
                let pb = BigInt::from(p);
                if (x.denom() % &pb).is_zero() || (y.denom() % &pb).is_zero() {
                    return None;
                }
                let t = Fp::new(0, p);
                let red = |r: &BigRational| t.from_int(r.numer()).mul(&t.from_int(r.denom()).inv().expect("unit"));
                Some(CurvePoint::Affine { x: red(x), y: red(y) })
            }
        }
    }
}

fn big_valuation(n: &BigInt, q: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let qb = BigInt::from(q);
    let mut m = n.abs();
    let mut v = 0;
    while (&m % &qb).is_zero() {
        m /= &qb;
        v += 1;
    }
    v
}

fn prime_divisors_big(n: &BigInt) -> Vec<u64> {
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut q = 2u64;
    while BigInt::from(q) * BigInt::from(q) <= m {
        let qb = BigInt::from(q);
        if (&m % &qb).is_zero() {
            out.push(q);
            while (&m % &qb).is_zero() {
                m /= &qb;
            }
        }
        q += 1;
        if q > 10_000_000 {
            break;
        }
    }
    if m > BigInt::one() {
        out.push(m.to_u64().unwrap_or(u64::MAX));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    #[test]
    fn invariants_of_11a1() {
        let e = WeierstrassModel::new([0, -1, 1, -10, -20]).unwrap();
        assert_eq!(e.disc, BigInt::from(-161051));
        assert_eq!(e.c4, BigInt::from(496));
        assert!(e.check_conductor(11).is_ok());
        assert!(e.check_conductor(33).is_err());
    }

    #[test]
    fn doubling_on_37a1() {
        let e = WeierstrassModel::new([0, 0, 1, -1, 0]).unwrap();
        let p = CurvePoint::rational(int(0), int(0));
        let two = e.mul(&p, 2).unwrap();
        assert_eq!(two, CurvePoint::rational(int(1), int(0)));
        assert!(e.on_curve(&two));
    }
}
