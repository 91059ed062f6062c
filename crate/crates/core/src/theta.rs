//! Theta series of Hecke characters of imaginary quadratic fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::exactalg::{CyclotomicElement, DirichletCharacter};
use crate::heckechar::{InfinityTypeCharacter, RingClassCharacter};
use crate::qexp::QExpansion;
use crate::quadfield::{ImagQuadField, QuadNum};

#[derive(Clone, Debug)]
pub enum ThetaCharacter {
    RingClass(RingClassCharacter),
    InfinityType(InfinityTypeCharacter),
}

#[derive(Clone, Debug)]
pub struct ThetaSeries {
    pub character: ThetaCharacter,
    pub series: QExpansion<CyclotomicElement>,
    /// 1 for finite order, k + 1 for infinity type (0, k).
    pub weight: u32,
    pub level: u64,
    pub nebentype: DirichletCharacter,
    /// ψ ≠ ψ′.
    pub cuspidal: bool,
}

/// θ_ψ = Σ a_n(ψ) q^n for a ring class character, to truncation q.
pub fn theta_series(psi: &RingClassCharacter, q: usize) -> Result<ThetaSeries> {
    let coeffs = (0..=q as u64).map(|n| psi.theta_coefficient(n)).collect::<Result<Vec<_>>>()?;
    let k = psi.field();
    let c = psi.conductor();
    let level = k.d() * c * c;
    let chi_k = DirichletCharacter::kronecker(k.disc())?;
    let eps = psi.central_character()?;
    let nebentype = chi_k.induce(level)?.mul(&eps.induce(level)?)?;
    let series = QExpansion::new(coeffs).with_meta(Some(1), Some(level), Some(nebentype.clone()));
    Ok(ThetaSeries {
        character: ThetaCharacter::RingClass(psi.clone()),
        series,
        weight: 1,
        level,
        nebentype,
        cuspidal: !psi.is_eisenstein()?,
    })
}

/// θ of a class-number-one character of infinity type (0, k): weight k + 1, level D_K.
pub fn theta_series_infinity(psi: &InfinityTypeCharacter, q: usize) -> Result<ThetaSeries> {
    let coeffs = (0..=q as u64)
        .map(|n| psi.theta_coefficient(n).map(CyclotomicElement::from_rational))
        .collect::<Result<Vec<_>>>()?;
    let k = psi.field();
    let level = k.d();
    let nebentype = DirichletCharacter::kronecker(k.disc())?;
    let weight = psi.weight() + 1;
    let series = QExpansion::new(coeffs).with_meta(Some(weight as i64), Some(level), Some(nebentype.clone()));
    Ok(ThetaSeries {
        character: ThetaCharacter::InfinityType(psi.clone()),
        series,
        weight,
        level,
        nebentype,
        // ψ_k′ = ψ̄_k ≠ ψ_k for k > 0
        cuspidal: psi.weight() > 0,
    })
}

/// Outcome of T_ℓ θ = a_ℓ θ on a_0..a_Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenCheck {
    pub prime: u64,
    pub pass: bool,
    pub detail: String,
}

/// Checks T_ℓ θ = a_ℓ(θ) θ on coefficients n ≤ q for every ℓ in `primes`.
/// θ must be known to q·ℓ; otherwise the check fails.
pub fn verify_eigenform(theta: &ThetaSeries, primes: &[u64], q: usize) -> Result<Vec<EigenCheck>> {
    let s = &theta.series;
    if s.coeffs().get(1) != Some(&CyclotomicElement::one()) {
        return Err(Error::Domain("eigenform check needs a_1 = 1".into()));
    }
    let mut out = Vec::new();
    for &l in primes {
        let need = q * l as usize;
        if s.truncation() < need {
            out.push(EigenCheck {
                prime: l,
                pass: false,
                detail: format!("truncation {} < {need}", s.truncation()),
            });
            continue;
        }
        let chi_l = theta.nebentype.value(l as i64);
        let t = s.truncate(need)?.hecke_t(l, theta.weight, &chi_l)?;
        let al = &s.coeffs()[l as usize];
        let bad = (0..=q).find(|&n| t.coeffs()[n] != &s.coeffs()[n] * al);
        out.push(EigenCheck {
            prime: l,
            pass: bad.is_none(),
            detail: match bad {
                None => format!("T_{l} θ = a_{l} θ on n ≤ {q}"),
                Some(n) => format!("T_{l} θ ≠ a_{l} θ at n = {n}"),
            },
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FamilyEigenvalueReport {
    pub p: u64,
    pub l: i64,
    pub a_p: BigRational,
    /// (ψ_{2l+2}(℘), ψ_{2l+2}(℘̄)).
    pub roots: (QuadNum, QuadNum),
    pub pass: bool,
}

/// For g = θ_{ψ_{2l+2}}: the roots of X² − a_p X + p^{2l+2} are ψ_{2l+2}(℘), ψ_{2l+2}(℘̄).
pub fn family_eigenvalue_check(field: &ImagQuadField, p: u64, l: i64) -> Result<FamilyEigenvalueReport> {
    if l < -1 {
        return Err(Error::Domain(format!("l = {l} gives negative character weight")));
    }
    let k = (2 * l + 2) as u32;
    let psi = InfinityTypeCharacter::new(field, k)?;
    let theta = theta_series_infinity(&psi, p as usize)?;
    let ap = theta.series.coeffs()[p as usize]
        .as_rational()
        .ok_or_else(|| Error::Internal("a_p not rational".into()))?;
    let (a, b) = psi.frobenius_pair(p)?;
    let d = field.disc();
    let sum_ok = a.add(&b) == QuadNum::from_rational(d, ap.clone());
    let pk = BigInt::from(p).pow(k);
    let prod_ok = a.mul(&b) == QuadNum::from_rational(d, BigRational::from_integer(pk));
    Ok(FamilyEigenvalueReport {
        p,
        l,
        a_p: ap,
        roots: (a, b),
        pass: sum_ok && prod_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};
    use std::sync::Arc;

    #[test]
    fn trivial_theta_on_7() {
        let o = Arc::new(ImagQuadField::new(7).unwrap().order(1).unwrap());
        let th = theta_series(&RingClassCharacter::trivial(o), 40).unwrap();
        let c = th.series.coeffs();
        let expect = [rat(1, 2), int(1), int(2), int(0), int(3)];
        for (a, e) in c.iter().zip(expect) {
            assert_eq!(*a, CyclotomicElement::from_rational(e));
        }
        assert!(!th.cuspidal);
        assert_eq!(th.level, 7);
        assert_eq!(th.weight, 1);
    }

    #[test]
    fn family_examples() {
        let k7 = ImagQuadField::new(7).unwrap();
        let r = family_eigenvalue_check(&k7, 11, 0).unwrap();
        assert!(r.pass);
        let r = family_eigenvalue_check(&k7, 2, 0).unwrap();
        assert_eq!(r.a_p, int(-3));
        assert!(r.pass);
    }
}
