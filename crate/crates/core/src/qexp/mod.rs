//! Truncated q-expansions and the operators d, U_p, V_p, depletion,
//! p-stabilisation and T_ℓ, plus Eisenstein series with character.

pub mod ring;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

pub use ring::Coeff;

use crate::error::{Error, Result};
use crate::exactalg::arith::{divisors, prime_divisors};
use crate::exactalg::bernoulli::generalized_bernoulli;
use crate::exactalg::{CyclotomicElement, DirichletCharacter};

/// Smallest truncation an operator may produce unless lowered explicitly.
pub const DEFAULT_MIN_TRUNCATION: usize = 30;

/// Σ_{n ≤ Q} a_n q^n, known exactly up to and including q^Q.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion<R: Coeff> {
    coeffs: Vec<R>,
    pub weight: Option<i64>,
    pub level: Option<u64>,
    pub character: Option<DirichletCharacter>,
    min_trunc: usize,
}

impl<R: Coeff> QExpansion<R> {
    /// Series with coefficients a_0..a_Q, Q = coeffs.len() − 1.
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion needs at least a_0");
        QExpansion {
            coeffs,
            weight: None,
            level: None,
            character: None,
            min_trunc: DEFAULT_MIN_TRUNCATION,
        }
    }

    pub fn zero(q: usize) -> Self {
        Self::new(vec![R::zero(); q + 1])
    }

    pub fn from_fn(q: usize, f: impl FnMut(usize) -> R) -> Self {
        Self::new((0..=q).map(f).collect())
    }

    pub fn with_meta(mut self, weight: Option<i64>, level: Option<u64>, character: Option<DirichletCharacter>) -> Self {
        self.weight = weight;
        self.level = level;
        self.character = character;
        self
    }

    pub fn with_min_truncation(mut self, m: usize) -> Self {
        self.min_trunc = m;
        self
    }

    pub fn min_truncation(&self) -> usize {
        self.min_trunc
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&R> {
        self.coeffs.get(n).ok_or_else(|| {
            Error::Precision(format!("coefficient a_{n} beyond truncation {}", self.truncation()))
        })
    }

    fn derived(&self, coeffs: Vec<R>) -> Result<Self> {
        let out_q = coeffs.len().saturating_sub(1);
        if out_q < self.min_trunc {
            return Err(Error::Precision(format!(
                "output truncation {out_q} is below the minimum {}",
                self.min_trunc
            )));
        }
        Ok(QExpansion {
            coeffs,
            weight: self.weight,
            level: self.level,
            character: self.character.clone(),
            min_trunc: self.min_trunc,
        })
    }

    /// Same series cut to a smaller truncation.
    pub fn truncate(&self, q: usize) -> Result<Self> {
        if q > self.truncation() {
            return Err(Error::Precision(format!(
                "cannot extend truncation {} to {q}",
                self.truncation()
            )));
        }
        self.derived(self.coeffs[..=q].to_vec())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let q = self.truncation().min(o.truncation());
        self.derived((0..=q).map(|n| self.coeffs[n].add(&o.coeffs[n])).collect())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let q = self.truncation().min(o.truncation());
        self.derived((0..=q).map(|n| self.coeffs[n].sub(&o.coeffs[n])).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        out
    }

    /// Cauchy product, truncated at the smaller input truncation.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let q = self.truncation().min(o.truncation());
        let mut out = vec![R::zero(); q + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(q + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(q + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        let mut r = self.derived(out)?;
        r.weight = match (self.weight, o.weight) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        r.character = None;
        Ok(r)
    }

    /// d = q d/dq: a_n ↦ n a_n.
    pub fn serre_d(&self) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.mul_int(&BigInt::from(n)))
            .collect();
        out.weight = self.weight.map(|k| k + 2);
        out
    }

    /// d^{-1} on a p-depleted series: a_n ↦ a_n / n.
    pub fn serre_d_inverse(&self, p: u64) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (n, a) in self.coeffs.iter().enumerate() {
            if n as u64 % p == 0 {
                if !a.is_zero() {
                    return Err(Error::Domain(format!(
                        "d^-1 needs a {p}-depleted series, but a_{n} ≠ 0"
                    )));
                }
                coeffs.push(R::zero());
            } else {
                let c = a
                    .mul_rational(&BigRational::new(BigInt::from(1), BigInt::from(n)))
                    .ok_or_else(|| Error::Domain(format!("cannot divide by {n} in the coefficient ring")))?;
                coeffs.push(c);
            }
        }
        let mut out = self.clone();
        out.coeffs = coeffs;
        out.weight = self.weight.map(|k| k - 2);
        Ok(out)
    }

    /// U_p: a_n ↦ a_{pn}; truncation ⌊Q/p⌋.
    pub fn u_operator(&self, p: u64) -> Result<Self> {
        let q = self.truncation() / p as usize;
        self.derived((0..=q).map(|n| self.coeffs[n * p as usize].clone()).collect())
    }

    /// V_p: a_n ↦ a_{n/p} (zero unless p | n); truncation Q·p, capped when asked.
    pub fn v_operator(&self, p: u64, cap: Option<usize>) -> Result<Self> {
        let p = p as usize;
        let mut q = self.truncation() * p;
        if let Some(c) = cap {
            q = q.min(c);
        }
        let mut out = self.derived(
            (0..=q)
                .map(|n| if n % p == 0 { self.coeffs[n / p].clone() } else { R::zero() })
                .collect(),
        )?;
        out.level = self.level.map(|l| l * p as u64);
        Ok(out)
    }

    /// p-depletion f^{[p]}: zeroes every a_n with p | n.
    pub fn deplete(&self, p: u64) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| if n as u64 % p == 0 { R::zero() } else { a.clone() })
            .collect();
        out
    }

    /// g(q) − β g(q^p), after checking α + β = a_p and αβ = χ(p) p^{k−1}.
    pub fn stabilize(&self, alpha: &R, beta: &R, p: u64, chi_p: &R, k: u32) -> Result<Self> {
        let ap = self.coeff(p as usize)?;
        if &alpha.add(beta) != ap {
            return Err(Error::Domain(format!("α + β ≠ a_{p}")));
        }
        let pk = chi_p.mul_int(&BigInt::from(p).pow(k.saturating_sub(1)));
        if alpha.mul(beta) != pk {
            return Err(Error::Domain(format!("αβ ≠ χ({p}) {p}^(k−1)")));
        }
        let q = self.truncation();
        let shifted = self.v_operator(p, Some(q))?;
        let mut out = self.sub(&shifted.scale(beta))?;
        out.level = self.level.map(|l| l * p);
        Ok(out)
    }

    /// T_ℓ: a_n ↦ a_{nℓ} + χ(ℓ) ℓ^{k−1} a_{n/ℓ}; truncation ⌊Q/ℓ⌋.
    pub fn hecke_t(&self, l: u64, k: u32, chi_l: &R) -> Result<Self> {
        let q = self.truncation() / l as usize;
        let eps = chi_l.mul_int(&BigInt::from(l).pow(k.saturating_sub(1)));
        let l = l as usize;
        self.derived(
            (0..=q)
                .map(|n| {
                    let mut c = self.coeffs[n * l].clone();
                    if n % l == 0 {
                        c = c.add(&eps.mul(&self.coeffs[n / l]));
                    }
                    c
                })
                .collect(),
        )
    }

    /// Whether T_ℓ f = a_ℓ(f)·f up to the truncation of T_ℓ f (a_1 = 1 required).
    pub fn is_hecke_eigen(&self, l: u64, k: u32, chi_l: &R) -> Result<bool> {
        if self.coeff(1)? != &R::one() {
            return Err(Error::Domain("eigenform check needs a_1 = 1".into()));
        }
        let t = self.hecke_t(l, k, chi_l)?;
        let al = self.coeff(l as usize)?;
        Ok((0..=t.truncation()).all(|n| t.coeffs[n] == self.coeffs[n].mul(al)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(|c| c.to_json()).collect())
    }
}

/// σ_{k−1,χ}(n) = Σ_{d | n} χ(d) d^{k−1}.
pub fn sigma_chi(n: u64, k: u32, chi: &DirichletCharacter) -> CyclotomicElement {
    let mut acc = CyclotomicElement::zero();
    for d in divisors(n) {
        let v = chi.value(d as i64);
        if !v.is_zero() {
            acc = &acc + &v.scale_int(&BigInt::from(d).pow(k - 1));
        }
    }
    acc
}

/// E_{k,χ} of level N: constant term L(χ, 1−k)/2 ∏_{q | N, q ∤ N_χ}(1 − χ(q)q^{k−1}),
/// a_n = σ_{k−1,χ_N}(n) with χ_N the character induced to modulus N.
pub fn eisenstein_series(k: u32, chi: &DirichletCharacter, level: u64, q: usize) -> Result<QExpansion<CyclotomicElement>> {
    if k == 0 {
        return Err(Error::Domain("weight must be positive".into()));
    }
    if chi.is_even() != (k % 2 == 0) {
        return Err(Error::Domain(format!("χ(−1) ≠ (−1)^{k}")));
    }
    let nchi = chi.modulus();
    if level % nchi != 0 {
        return Err(Error::Domain(format!("modulus {nchi} does not divide the level {level}")));
    }
    let chi_n = chi.induce(level)?;
    // L(χ, 1−k) = −B_{k,χ}/k
    let b = generalized_bernoulli(k as usize, chi);
    let mut a0 = b.scale(&BigRational::new(BigInt::from(-1), BigInt::from(2 * k as i64)));
    for p in prime_divisors(level) {
        if nchi % p != 0 {
            let f = &CyclotomicElement::one() - &chi.value(p as i64).scale_int(&BigInt::from(p).pow(k - 1));
            a0 = &a0 * &f;
        }
    }
    let mut coeffs = vec![a0];
    for n in 1..=q as u64 {
        coeffs.push(sigma_chi(n, k, &chi_n));
    }
    Ok(QExpansion::new(coeffs).with_meta(Some(k as i64), Some(level), Some(chi_n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn series(q: usize) -> QExpansion<BigRational> {
        QExpansion::from_fn(q, |n| rat((n * n) as i64 % 7 - 3, 1 + n as i64 % 3))
    }

    #[test]
    fn operator_identities() {
        let f = series(200);
        assert_eq!(f.v_operator(3, None).unwrap().u_operator(3).unwrap(), f);
        let dep = f.deplete(5);
        assert!(dep.u_operator(5).unwrap().coeffs().iter().all(|c| Coeff::is_zero(c)));
        assert_eq!(dep.deplete(5), dep);
        assert_eq!(dep.serre_d().serre_d_inverse(5).unwrap(), dep);
        assert!(f.serre_d_inverse(5).is_err());
        let q = QExpansion::new(vec![int(0), int(1)]).with_min_truncation(0);
        assert_eq!(q.serre_d(), q);
    }

    #[test]
    fn truncation_floor() {
        let f = series(100);
        assert!(matches!(f.u_operator(5), Err(Error::Precision(_))));
        assert_eq!(f.u_operator(3).unwrap().truncation(), 33);
    }

    #[test]
    fn eisenstein_examples() {
        let chi7 = DirichletCharacter::kronecker(-7).unwrap();
        let e = eisenstein_series(1, &chi7, 7, 40).unwrap();
        let c = e.coeffs();
        assert_eq!(c[0], CyclotomicElement::from_rational(rat(1, 2)));
        assert_eq!(c[1], CyclotomicElement::one());
        assert_eq!(c[2], CyclotomicElement::from_int(2));
        assert_eq!(c[3], CyclotomicElement::zero());
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        let e4 = eisenstein_series(1, &chi4, 4, 40).unwrap();
        assert_eq!(e4.coeffs()[0], CyclotomicElement::from_rational(rat(1, 4)));
        assert!(eisenstein_series(2, &chi7, 7, 40).is_err());
        let dep = e.deplete(3);
        assert_eq!(dep.coeffs()[3], CyclotomicElement::zero());
        assert_eq!(dep.coeffs()[2], CyclotomicElement::from_int(2));
    }

    #[test]
    fn eisenstein_is_eigen() {
        let chi7 = DirichletCharacter::kronecker(-7).unwrap();
        let e = eisenstein_series(1, &chi7, 7, 400).unwrap();
        let t2 = e.hecke_t(2, 1, &chi7.value(2)).unwrap();
        assert_eq!(t2, e.truncate(200).unwrap().scale(&CyclotomicElement::from_int(2)));
        assert!(QExpansion::<BigRational>::zero(100).hecke_t(2, 2, &int(1)).unwrap().coeffs().iter().all(|c| Coeff::is_zero(c)));
    }
}
