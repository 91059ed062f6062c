//! Imaginary quadratic fields, prime splitting and ideals coprime to a conductor.

use std::collections::BTreeMap;
use std::fmt;

use super::classgroup::ClassGroup;
use super::element::QuadNum;
use super::form::QuadForm;
use crate::error::{Error, Result};
use crate::exactalg::arith::{factorize, is_fundamental_discriminant, is_prime, isqrt, kronecker_symbol, valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImagQuadField {
    d: u64,
}

impl ImagQuadField {
    /// Q(√−D) for a fundamental discriminant −D.
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 || !is_fundamental_discriminant(-(d as i64)) {
            return Err(Error::Domain(format!("−{d} is not a fundamental discriminant")));
        }
        Ok(ImagQuadField { d })
    }

    /// D_K, so that the discriminant is −D_K.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        -(self.d as i64)
    }

    /// Number of roots of unity.
    pub fn w(&self) -> u64 {
        match self.d {
            3 => 6,
            4 => 4,
            _ => 2,
        }
    }

    /// Set for D_K < 7, outside the range the λ pipeline accepts.
    pub fn small_disc_warning(&self) -> bool {
        self.d < 7
    }

    /// χ_K(n) = (−D_K | n).
    pub fn chi(&self, n: i64) -> i32 {
        kronecker_symbol(self.disc(), n).expect("nonzero modulus")
    }

    pub fn order(&self, c: u64) -> Result<Order> {
        Order::new(self.clone(), c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Split => "split",
            Kind::Inert => "inert",
            Kind::Ramified => "ramified",
        })
    }
}

/// A prime ideal of O_K. For split q, `conj = false` is the distinguished prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeIdeal {
    Split { q: u64, conj: bool },
    Inert { q: u64 },
    Ramified { q: u64 },
}

impl PrimeIdeal {
    pub fn q(&self) -> u64 {
        match *self {
            PrimeIdeal::Split { q, .. } | PrimeIdeal::Inert { q } | PrimeIdeal::Ramified { q } => q,
        }
    }

    pub fn norm(&self) -> u64 {
        match *self {
            PrimeIdeal::Inert { q } => q * q,
            _ => self.q(),
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            PrimeIdeal::Split { q, conj } => PrimeIdeal::Split { q, conj: !conj },
            p => p,
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeIdeal::Split { q, conj: false } => write!(f, "P{q}"),
            PrimeIdeal::Split { q, conj: true } => write!(f, "P{q}'"),
            PrimeIdeal::Inert { q } => write!(f, "({q})"),
            PrimeIdeal::Ramified { q } => write!(f, "R{q}"),
        }
    }
}

/// An integral ideal of O_K as a factorization into prime ideals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    factors: BTreeMap<PrimeIdeal, u32>,
}

impl Ideal {
    pub fn unit() -> Self {
        Ideal::default()
    }

    pub fn prime(p: PrimeIdeal) -> Self {
        Ideal::prime_power(p, 1)
    }

    pub fn prime_power(p: PrimeIdeal, e: u32) -> Self {
        let mut factors = BTreeMap::new();
        if e > 0 {
            factors.insert(p, e);
        }
        Ideal { factors }
    }

    pub fn factors(&self) -> &BTreeMap<PrimeIdeal, u32> {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn norm(&self) -> u64 {
        self.factors.iter().map(|(p, e)| p.norm().pow(*e)).product()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (p, e) in &o.factors {
            *factors.entry(*p).or_insert(0) += e;
        }
        Ideal { factors }
    }

    pub fn pow(&self, n: u32) -> Self {
        Ideal {
            factors: self
                .factors
                .iter()
                .filter(|_| n > 0)
                .map(|(p, e)| (*p, e * n))
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Ideal {
            factors: self.factors.iter().map(|(p, e)| (p.conj(), *e)).collect(),
        }
    }

    /// O_K/𝔞 is cyclic iff no rational prime divides 𝔞.
    pub fn is_cyclic_quotient(&self) -> bool {
        self.factors.iter().all(|(p, e)| match p {
            PrimeIdeal::Inert { .. } => false,
            PrimeIdeal::Ramified { .. } => *e <= 1,
            PrimeIdeal::Split { q, conj } => {
                let other = PrimeIdeal::Split { q: *q, conj: !conj };
                !self.factors.contains_key(&other)
            }
        })
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("(1)");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub q: u64,
    pub kind: Kind,
    /// Form (q, B, ·) of discriminant −D_K c² for the distinguished prime above q.
    pub form: Option<QuadForm>,
    pub conj_form: Option<QuadForm>,
    /// b ∈ [0, q] with b² ≡ −D_K (mod 4q) defining the distinguished prime over O_K.
    pub b: Option<i64>,
}

/// The order O_c of conductor c in K with its ring class group.
#[derive(Clone, Debug)]
pub struct Order {
    field: ImagQuadField,
    c: u64,
    group: ClassGroup,
}

impl Order {
    pub fn new(field: ImagQuadField, c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::Domain("conductor must be positive".into()));
        }
        let disc = field.disc() * (c as i64) * (c as i64);
        let group = ClassGroup::new(disc)?;
        Ok(Order { field, c, group })
    }

    pub fn field(&self) -> &ImagQuadField {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.c
    }

    pub fn disc(&self) -> i64 {
        self.group.disc()
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn class_number(&self) -> u64 {
        self.group.class_number()
    }

    pub fn splitting(&self, q: u64) -> Result<PrimeSplitting> {
        if !is_prime(q) {
            return Err(Error::Domain(format!("{q} is not prime")));
        }
        if self.c % q == 0 {
            return Err(Error::Unsupported(format!("prime {q} divides the conductor {}", self.c)));
        }
        let dk = self.field.disc();
        let kind = match self.field.chi(q as i64) {
            1 => Kind::Split,
            -1 => Kind::Inert,
            _ => Kind::Ramified,
        };
        if kind == Kind::Inert {
            return Ok(PrimeSplitting {
                q,
                kind,
                form: None,
                conj_form: None,
                b: None,
            });
        }
        let qi = q as i64;
        let b = (0..=qi)
            .find(|b| (b * b - dk).rem_euclid(4 * qi) == 0)
            .ok_or_else(|| Error::Internal(format!("no square root of {dk} mod 4·{q}")))?;
        let form = self.prime_form(q, b);
        let conj = self.prime_form(q, -b);
        Ok(PrimeSplitting {
            q,
            kind,
            form: Some(form),
            conj_form: Some(conj),
            b: Some(b),
        })
    }

    /// Form of O_K-prime [q, (−b + √−D_K)/2] intersected with O_c.
    fn prime_form(&self, q: u64, b: i64) -> QuadForm {
        let (qi, c) = (q as i64, self.c as i64);
        let mut bb = (b * c).rem_euclid(2 * qi);
        if bb > qi {
            bb -= 2 * qi;
        }
        QuadForm::from_ab(qi, bb, self.disc()).reduce()
    }

    pub fn prime_ideal_class(&self, p: &PrimeIdeal) -> Result<QuadForm> {
        let s = self.splitting(p.q())?;
        Ok(match *p {
            PrimeIdeal::Inert { .. } => self.group.identity(),
            PrimeIdeal::Split { conj: true, .. } => s.conj_form.expect("split prime has a form"),
            _ => s.form.expect("prime has a form"),
        })
    }

    /// Ring class of an ideal coprime to c.
    pub fn ideal_class(&self, a: &Ideal) -> Result<QuadForm> {
        let mut acc = self.group.identity();
        for (p, e) in a.factors() {
            acc = acc.compose(&self.prime_ideal_class(p)?.pow(*e as u64));
        }
        Ok(acc)
    }

    /// Primes of O_K above q, the distinguished one first.
    pub fn primes_above(&self, q: u64) -> Result<Vec<PrimeIdeal>> {
        Ok(match self.splitting(q)?.kind {
            Kind::Split => vec![PrimeIdeal::Split { q, conj: false }, PrimeIdeal::Split { q, conj: true }],
            Kind::Inert => vec![PrimeIdeal::Inert { q }],
            Kind::Ramified => vec![PrimeIdeal::Ramified { q }],
        })
    }

    /// Every integral ideal of norm n coprime to c; empty when gcd(n, c) > 1.
    pub fn ideals_of_norm(&self, n: u64) -> Result<Vec<Ideal>> {
        if n == 0 {
            return Err(Error::Domain("norm must be positive".into()));
        }
        if num_integer::gcd(n, self.c) > 1 {
            return Ok(vec![]);
        }
        let mut out = vec![Ideal::unit()];
        for (q, e) in factorize(n) {
            let local: Vec<Ideal> = match self.splitting(q)?.kind {
                Kind::Split => (0..=e)
                    .map(|i| {
                        Ideal::prime_power(PrimeIdeal::Split { q, conj: false }, i)
                            .mul(&Ideal::prime_power(PrimeIdeal::Split { q, conj: true }, e - i))
                    })
                    .collect(),
                Kind::Inert if e % 2 == 0 => vec![Ideal::prime_power(PrimeIdeal::Inert { q }, e / 2)],
                Kind::Inert => vec![],
                Kind::Ramified => vec![Ideal::prime_power(PrimeIdeal::Ramified { q }, e)],
            };
            out = out.iter().flat_map(|a| local.iter().map(move |b| a.mul(b))).collect();
            if out.is_empty() {
                break;
            }
        }
        Ok(out)
    }

    /// A cyclic ideal of norm N built from distinguished primes, or None when
    /// some prime power of N admits no such ideal.
    pub fn heegner_ideal(&self, n: u64) -> Result<Option<Ideal>> {
        let mut acc = Ideal::unit();
        for (q, e) in factorize(n) {
            if self.c % q == 0 {
                return Ok(None);
            }
            match self.splitting(q)?.kind {
                Kind::Split => acc = acc.mul(&Ideal::prime_power(PrimeIdeal::Split { q, conj: false }, e)),
                Kind::Ramified if e == 1 => acc = acc.mul(&Ideal::prime(PrimeIdeal::Ramified { q })),
                _ => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    /// q-adic square root r of −D_K modulo q^k with r ≡ b (mod q), or mod 4 when q = 2.
    pub fn embedding_root(&self, q: u64, k: u32) -> Result<i128> {
        let s = self.splitting(q)?;
        let b = s
            .b
            .ok_or_else(|| Error::Domain(format!("{q} is inert in Q(√−{})", self.field.d)))?;
        Ok(embedding_root(self.field.disc(), q, b, k))
    }

    /// Generator γ = (x + y√−D_K)/2 of a principal ideal of O_K, normalized
    /// with y > 0, or y = 0 and x > 0.
    pub fn principal_generator(&self, a: &Ideal) -> Result<QuadNum> {
        let dk = self.field.d as i128;
        let n = a.norm() as i128;
        let d = self.field.disc();
        let ymax = isqrt((4 * n / dk) as u128) as i128;
        for y in 0..=ymax {
            let x2 = 4 * n - dk * y * y;
            let x = isqrt(x2 as u128) as i128;
            if x * x != x2 || (x - y * dk).rem_euclid(2) != 0 {
                continue;
            }
            for sx in [1i128, -1] {
                if x == 0 && sx == -1 {
                    continue;
                }
                let (gx, gy) = (sx * x, y);
                if y == 0 && gx < 0 {
                    continue;
                }
                if self.generates(a, gx, gy)? {
                    return Ok(QuadNum::half(d, gx as i64, gy as i64));
                }
            }
        }
        Err(Error::Internal(format!("{a} is not principal in O_K")))
    }

    /// Whether (x + y√−D_K)/2, of norm N(𝔞), has the same split-prime valuations as 𝔞.
    fn generates(&self, a: &Ideal, x: i128, y: i128) -> Result<bool> {
        for (p, e) in a.factors() {
            if let PrimeIdeal::Split { q, conj } = *p {
                let e_here = *e;
                let e_other = a
                    .factors()
                    .get(&PrimeIdeal::Split { q, conj: !conj })
                    .copied()
                    .unwrap_or(0);
                let k = e_here + e_other + 2;
                let r = self.embedding_root(q, k)?;
                let r = if conj { -r } else { r };
                let m = (q as i128).pow(k);
                let v = (x + y * r).rem_euclid(m * 2);
                let capped = |v: i128, q: u64| if v == 0 { k } else { valuation(v, q).min(k) };
                let val = if q == 2 {
                    capped(v, 2) as i64 - 1
                } else {
                    capped(v.rem_euclid(m), q) as i64
                };
                if val != e_here as i64 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Root of r² ≡ disc modulo q^k selected by r ≡ b mod q (mod 4 for q = 2).
pub fn embedding_root(disc: i64, q: u64, b: i64, k: u32) -> i128 {
    let m = (q as i128).pow(k);
    let dd = disc as i128;
    if q == 2 {
        let k = k.max(2);
        let mut r = (b as i128).rem_euclid(4);
        for j in 3..=k + 1 {
            let mj = 1i128 << j;
            if (r * r - dd).rem_euclid(mj) != 0 {
                r += 1 << (j - 2);
            }
        }
        return r.rem_euclid(m.max(4));
    }
    let qi = q as i128;
    let mut r = (b as i128).rem_euclid(qi);
    let mut mk = qi;
    for _ in 1..k {
        // Newton step r ← r − (r² − disc)/(2r) modulo the next power
        mk *= qi;
        let inv = crate::exactalg::arith::mod_inv((2 * r).rem_euclid(mk), mk).expect("unit");
        r = (r - (r * r - dd).rem_euclid(mk) * inv).rem_euclid(mk);
    }
    r.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_examples() {
        let k11 = ImagQuadField::new(11).unwrap().order(1).unwrap();
        assert_eq!(k11.splitting(3).unwrap().kind, Kind::Split);
        assert_eq!(k11.splitting(11).unwrap().kind, Kind::Ramified);
        let k7 = ImagQuadField::new(7).unwrap().order(1).unwrap();
        assert_eq!(k7.splitting(3).unwrap().kind, Kind::Inert);
        assert_eq!(k7.splitting(2).unwrap().kind, Kind::Split);
        let o = ImagQuadField::new(7).unwrap().order(3).unwrap();
        assert!(matches!(o.splitting(3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn ideal_counts() {
        let k7 = ImagQuadField::new(7).unwrap().order(1).unwrap();
        assert_eq!(k7.ideals_of_norm(2).unwrap().len(), 2);
        assert_eq!(k7.ideals_of_norm(3).unwrap().len(), 0);
        assert_eq!(k7.ideals_of_norm(1).unwrap(), vec![Ideal::unit()]);
    }

    #[test]
    fn heegner_examples() {
        let k11 = ImagQuadField::new(11).unwrap().order(1).unwrap();
        let n = k11.heegner_ideal(11).unwrap().unwrap();
        assert_eq!(n.norm(), 11);
        assert!(n.is_cyclic_quotient());
        let k7 = ImagQuadField::new(7).unwrap().order(1).unwrap();
        assert_eq!(k7.heegner_ideal(3).unwrap(), None);
        assert_eq!(k7.heegner_ideal(1).unwrap(), Some(Ideal::unit()));
    }

    #[test]
    fn generators() {
        let k11 = ImagQuadField::new(11).unwrap().order(1).unwrap();
        let p3 = Ideal::prime(PrimeIdeal::Split { q: 3, conj: false });
        let g = k11.principal_generator(&p3).unwrap();
        assert_eq!(g, QuadNum::half(-11, -1, 1));
        let g2 = k11.principal_generator(&p3.conj()).unwrap();
        assert_eq!(g2, QuadNum::half(-11, 1, 1));
        let k7 = ImagQuadField::new(7).unwrap().order(1).unwrap();
        let p2 = Ideal::prime(PrimeIdeal::Split { q: 2, conj: false });
        let g = k7.principal_generator(&p2).unwrap();
        assert_eq!(g.norm(), crate::exactalg::rational::int(2));
        assert_eq!(g, QuadNum::half(-7, -1, 1));
        assert_eq!(k7.principal_generator(&Ideal::unit()).unwrap(), QuadNum::from_int(-7, 1));
        // higher powers: P2^3 in Q(√−7)
        let g = k7.principal_generator(&p2.pow(3)).unwrap();
        assert_eq!(g, QuadNum::half(-7, -1, 1).pow(3).unwrap().neg_if_needed());
    }
}

#[cfg(test)]
impl QuadNum {
    fn neg_if_needed(self) -> Self {
        use num_traits::Signed;
        if self.y.is_negative() || (self.y == num_traits::Zero::zero() && self.x.is_negative()) {
            self.neg()
        } else {
            self
        }
    }
}
