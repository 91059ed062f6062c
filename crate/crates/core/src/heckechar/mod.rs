//! Hecke characters of imaginary quadratic fields: finite-order ring class
//! characters and, for class number one, characters of infinity type (0, k).

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::arith::{factorize, gcd_u, lcm_u};
use crate::exactalg::{CyclotomicElement, DirichletCharacter};
use crate::quadfield::{Ideal, ImagQuadField, Kind, Order, PrimeIdeal, QuadForm, QuadNum};

/// ψ: Cl(O_c) → μ_m, given by ψ(g_i) = ζ_{d_i}^{e_i} on the SNF generators g_i.
#[derive(Clone, Debug)]
pub struct RingClassCharacter {
    order: Arc<Order>,
    exps: Vec<u64>,
    m: u64,
}

impl PartialEq for RingClassCharacter {
    fn eq(&self, o: &Self) -> bool {
        self.order.disc() == o.order.disc() && self.exps == o.exps
    }
}

/// Frobenius eigenvalues α = ψ(℘), β = ψ(℘̄) at a split prime.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusData {
    pub p: u64,
    pub alpha: CyclotomicElement,
    pub beta: CyclotomicElement,
}

impl RingClassCharacter {
    pub fn new(order: Arc<Order>, exps: Vec<u64>) -> Result<Self> {
        let inv = order.class_group().invariants().to_vec();
        if exps.len() != inv.len() {
            return Err(Error::Validation(format!(
                "character needs {} exponents (class group invariants {:?}), got {}",
                inv.len(),
                inv,
                exps.len()
            )));
        }
        let exps: Vec<u64> = exps.iter().zip(&inv).map(|(e, d)| e % d).collect();
        let m = exps
            .iter()
            .zip(&inv)
            .map(|(&e, &d)| d / gcd_u(e, d))
            .fold(1, lcm_u);
        Ok(RingClassCharacter { order, exps, m })
    }

    pub fn trivial(order: Arc<Order>) -> Self {
        let r = order.class_group().invariants().len();
        RingClassCharacter::new(order, vec![0; r]).expect("trivial character")
    }

    pub fn order_ctx(&self) -> &Order {
        &self.order
    }

    pub fn shared_order(&self) -> Arc<Order> {
        self.order.clone()
    }

    pub fn field(&self) -> &ImagQuadField {
        self.order.field()
    }

    pub fn conductor(&self) -> u64 {
        self.order.conductor()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    /// Forms of the generators the exponents refer to.
    pub fn generator_forms(&self) -> &[QuadForm] {
        self.order.class_group().generators()
    }

    /// Order of ψ as a character, i.e. the smallest m with ψ^m = 1.
    pub fn char_order(&self) -> u64 {
        self.m
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 1
    }

    /// k with ψ(class) = ζ_m^k.
    pub fn class_exponent(&self, f: &QuadForm) -> Result<u64> {
        let g = self.order.class_group();
        let x = g.dlog(f)?;
        let m = self.m;
        let mut k = 0u64;
        for ((&e, &d), &xi) in self.exps.iter().zip(g.invariants()).zip(x) {
            // ζ_d^t = ζ_m^{t m / d}; t m / d is integral since d / gcd(e, d) divides m
            let t = (e as u128 * xi as u128 % d as u128) * m as u128 / d as u128;
            k = (k + t as u64) % m;
        }
        Ok(k)
    }

    pub fn value_on_class(&self, f: &QuadForm) -> Result<CyclotomicElement> {
        Ok(CyclotomicElement::zeta_pow(self.m, self.class_exponent(f)? as i64))
    }

    fn check_coprime(&self, a: &Ideal) -> Result<()> {
        let c = self.conductor();
        if let Some(p) = a.factors().keys().find(|p| c % p.q() == 0) {
            return Err(Error::Domain(format!("ideal {a} is not coprime to the conductor {c} (prime {p})")));
        }
        Ok(())
    }

    pub fn ideal_exponent(&self, a: &Ideal) -> Result<u64> {
        self.check_coprime(a)?;
        self.class_exponent(&self.order.ideal_class(a)?)
    }

    /// ψ(𝔞) for an ideal coprime to c.
    pub fn evaluate(&self, a: &Ideal) -> Result<CyclotomicElement> {
        Ok(CyclotomicElement::zeta_pow(self.m, self.ideal_exponent(a)? as i64))
    }

    /// ψ′(𝔞) = ψ(𝔞̄), computed from the conjugate forms of the generators.
    pub fn conjugate_character(&self) -> Result<Self> {
        let g = self.order.class_group();
        let mut exps = Vec::with_capacity(self.exps.len());
        for (gen, &d) in g.generators().iter().zip(g.invariants()) {
            let conj = QuadForm::new(gen.a, -gen.b, gen.c).reduce();
            let k = self.class_exponent(&conj)?;
            // ζ_m^k = ζ_d^{k d / m}
            if (k * d) % self.m != 0 {
                return Err(Error::Internal("conjugate value outside μ_d".into()));
            }
            exps.push(k * d / self.m);
        }
        RingClassCharacter::new(self.order.clone(), exps)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.order.disc() != o.order.disc() {
            return Err(Error::Domain("characters of different orders".into()));
        }
        let exps = self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect();
        RingClassCharacter::new(self.order.clone(), exps)
    }

    pub fn inverse(&self) -> Self {
        let inv = self.order.class_group().invariants();
        let exps = self.exps.iter().zip(inv).map(|(e, d)| (d - e) % d).collect();
        RingClassCharacter::new(self.order.clone(), exps).expect("same shape")
    }

    pub fn pow(&self, n: i64) -> Self {
        let inv = self.order.class_group().invariants();
        let exps = self
            .exps
            .iter()
            .zip(inv)
            .map(|(&e, &d)| ((e as i128 * n as i128).rem_euclid(d as i128)) as u64)
            .collect();
        RingClassCharacter::new(self.order.clone(), exps).expect("same shape")
    }

    /// ψ·ψ′ = 1.
    pub fn is_self_dual(&self) -> Result<bool> {
        Ok(self.mul(&self.conjugate_character()?)?.is_trivial())
    }

    /// ψ = ψ′, i.e. θ_ψ is an Eisenstein series.
    pub fn is_eisenstein(&self) -> Result<bool> {
        Ok(self.conjugate_character()? == *self)
    }

    /// ε_ψ(n) = ψ((n)) on integers coprime to c, as a character mod c.
    pub fn central_character(&self) -> Result<DirichletCharacter> {
        let c = self.conductor();
        if c == 1 {
            return Ok(DirichletCharacter::trivial(1));
        }
        let mut table = vec![None; c as usize];
        for (a, slot) in table.iter_mut().enumerate() {
            if a == 0 || gcd_u(a as u64, c) != 1 {
                continue;
            }
            *slot = Some(self.ideal_exponent(&self.principal_ideal_of(a as u64)?)?);
        }
        DirichletCharacter::from_table(c, self.m, table)
    }

    /// The ideal n·O_K as a prime factorization.
    fn principal_ideal_of(&self, n: u64) -> Result<Ideal> {
        let mut acc = Ideal::unit();
        for (q, e) in factorize(n) {
            let s = self.order.splitting(q)?;
            let part = match s.kind {
                Kind::Split => Ideal::prime_power(PrimeIdeal::Split { q, conj: false }, e)
                    .mul(&Ideal::prime_power(PrimeIdeal::Split { q, conj: true }, e)),
                Kind::Inert => Ideal::prime_power(PrimeIdeal::Inert { q }, e),
                Kind::Ramified => Ideal::prime_power(PrimeIdeal::Ramified { q }, 2 * e),
            };
            acc = acc.mul(&part);
        }
        Ok(acc)
    }

    /// a_n(ψ) = Σ_{N𝔞 = n, (𝔞, c) = 1} ψ(𝔞); a_0 = h/w for ψ = 1, else 0.
    pub fn theta_coefficient(&self, n: u64) -> Result<CyclotomicElement> {
        if n == 0 {
            if self.is_trivial() {
                let h = self.order.class_number() as i64;
                let w = self.field().w() as i64;
                return Ok(CyclotomicElement::from_rational(BigRational::new(h.into(), w.into())));
            }
            return Ok(CyclotomicElement::zero());
        }
        let mut counts = vec![0i64; self.m as usize];
        for a in self.order.ideals_of_norm(n)? {
            counts[self.ideal_exponent(&a)? as usize] += 1;
        }
        Ok(exponent_counts_to_cyclo(self.m, &counts))
    }

    /// α = ψ(℘), β = ψ(℘̄) at a split prime p ∤ D_K c².
    pub fn frobenius_data(&self, p: u64) -> Result<FrobeniusData> {
        let s = self.order.splitting(p)?;
        if s.kind != Kind::Split {
            return Err(Error::Domain(format!("{p} is {} in K, not split", s.kind)));
        }
        let alpha = self.evaluate(&Ideal::prime(PrimeIdeal::Split { q: p, conj: false }))?;
        let beta = self.evaluate(&Ideal::prime(PrimeIdeal::Split { q: p, conj: true }))?;
        if !(&alpha * &beta).is_one() {
            return Err(Error::Internal(format!("ψ(℘)ψ(℘̄) ≠ 1 at {p}")));
        }
        Ok(FrobeniusData { p, alpha, beta })
    }
}

/// Σ_k counts[k] ζ_m^k.
pub(crate) fn exponent_counts_to_cyclo(m: u64, counts: &[i64]) -> CyclotomicElement {
    let mut acc = CyclotomicElement::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c != 0 {
            acc = &acc + &CyclotomicElement::zeta_pow(m, k as i64).scale_int(&BigInt::from(c));
        }
    }
    acc
}

/// Coefficients of ψN^k: a_n ↦ n^k a_n.
pub fn scale_by_norm_power(coeffs: &[CyclotomicElement], k: i64) -> Vec<CyclotomicElement> {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| {
            if n == 0 || k == 0 {
                a.clone()
            } else {
                a.scale(&crate::exactalg::rational::pow(&BigRational::from_integer(n.into()), k))
            }
        })
        .collect()
}

/// ψ_k((α)) = ᾱ^k on a class-number-one field, k even.
#[derive(Clone, Debug)]
pub struct InfinityTypeCharacter {
    order: Arc<Order>,
    k: u32,
}

impl InfinityTypeCharacter {
    pub fn new(field: &ImagQuadField, k: u32) -> Result<Self> {
        if k % 2 != 0 {
            return Err(Error::Unsupported(format!("infinity type (0, {k}) needs even k")));
        }
        if k as u64 % field.w() != 0 {
            return Err(Error::Unsupported(format!(
                "(0, {k}) is not trivial on the {} units of Q(√−{})",
                field.w(),
                field.d()
            )));
        }
        let order = Arc::new(field.order(1)?);
        if order.class_number() != 1 {
            return Err(Error::Unsupported(format!(
                "infinity-type characters need class number one (h = {})",
                order.class_number()
            )));
        }
        Ok(InfinityTypeCharacter { order, k })
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn field(&self) -> &ImagQuadField {
        self.order.field()
    }

    pub fn order_ctx(&self) -> &Order {
        &self.order
    }

    pub fn evaluate(&self, a: &Ideal) -> Result<QuadNum> {
        let g = self.order.principal_generator(a)?;
        g.conj().pow(self.k as i64)
    }

    pub fn theta_coefficient(&self, n: u64) -> Result<BigRational> {
        if n == 0 {
            return Ok(if self.k == 0 {
                BigRational::new(BigInt::one(), BigInt::from(self.field().w()))
            } else {
                BigRational::zero()
            });
        }
        let d = self.field().disc();
        let mut acc = QuadNum::from_int(d, 0);
        for a in self.order.ideals_of_norm(n)? {
            acc = acc.add(&self.evaluate(&a)?);
        }
        if !acc.y.is_zero() {
            return Err(Error::Internal(format!("a_{n} of θ_ψ{} is not rational", self.k)));
        }
        Ok(acc.x)
    }

    /// (ψ(℘), ψ(℘̄)) at a split prime.
    pub fn frobenius_pair(&self, p: u64) -> Result<(QuadNum, QuadNum)> {
        let a = self.evaluate(&Ideal::prime(PrimeIdeal::Split { q: p, conj: false }))?;
        let b = self.evaluate(&Ideal::prime(PrimeIdeal::Split { q: p, conj: true }))?;
        Ok((a, b))
    }
}
