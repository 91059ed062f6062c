//! Interpolation-factor algebra: the 𝔢/𝔣 factors, the Euler and assembly
//! identities, the p-adic fudge factors, and the three routes to λ.

pub mod arch;
pub mod euler;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

pub use arch::{
    f_bdp, f_hr, f_infty_assembled, f_infty_closed, f_infty_theorem_value, f_k, f_pet, omega, sl2_index,
    verify_assembly, ArchMonomial, AssemblyCheck, LevelData,
};
pub use euler::{
    e_bdp, e_bdp_value, e_hr, e_hr_at_zero, e_hr_parts, e_hr_value, e_k, e_k_boundary_zero, e_k_value, verify_euler_identity, EulerIdentityCheck,
    EulerSample, SymbolicFactor, EULER_DEGREE_BOUND,
};

use crate::elliptic::{CurvePoint, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exactalg::arith::{gcd_u, is_prime, prime_divisors};
use crate::exactalg::identity::{verify_rational_identity, IdentityOutcome};
use crate::exactalg::rational::int;
use crate::exactalg::CyclotomicElement as Cyclo;
use crate::heckechar::RingClassCharacter;
use crate::lfun::{e_c, EulerData};
use crate::padic::{embed_cyclotomic, FormalGroupContext, PadicNumber};
use crate::quadfield::{Ideal, Kind, PrimeIdeal};

/// Everything the factor formulas read off a (E, K, c, ψ, p) configuration.
#[derive(Clone, Debug)]
pub struct FactorScenario {
    pub curve: WeierstrassModel,
    pub psi: RingClassCharacter,
    pub p: u64,
    pub a_p: i64,
    pub level: LevelData,
    pub h_k: u64,
    pub g_k: u64,
    pub euler: EulerData,
    /// ψ(𝔑) for the Heegner ideal 𝔑.
    pub psi_heegner: Cyclo,
    /// ψ(℘̄).
    pub psi_pbar: Cyclo,
}

impl FactorScenario {
    /// Validates the configuration: conductor of E, p odd, good, split and
    /// prime to N, the Heegner hypothesis, and α ≠ β when ψ² ≠ 1.
    pub fn new(curve: WeierstrassModel, n_e: u64, psi: RingClassCharacter, p: u64) -> Result<Self> {
        curve.check_conductor(n_e)?;
        let field = psi.field().clone();
        let dk = field.d();
        let c = psi.conductor();
        let n = crate::exactalg::arith::lcm_u(dk * c * c, n_e);
        if p == 2 || !is_prime(p) {
            return Err(Error::Validation(format!("p = {p} must be an odd prime")));
        }
        if n % p == 0 {
            return Err(Error::Validation(format!("p = {p} divides N = {n}")));
        }
        let order = psi.order_ctx();
        if order.splitting(p)?.kind != Kind::Split {
            return Err(Error::Validation(format!("p = {p} does not split in Q(√−{dk})")));
        }
        let mut a_f = BTreeMap::new();
        for q in prime_divisors(n) {
            let a = if n_e % q == 0 { curve.bad_prime_aq(q)? } else { curve.trace_ap(q)? };
            a_f.insert(q, a);
        }
        let euler = EulerData::new(psi.clone(), n_e, a_f)?;
        let psi_heegner = psi.evaluate(&euler.heegner)?;
        let frob = psi.frobenius_data(p)?;
        let psi2 = psi.pow(2);
        if !psi2.is_trivial() && frob.alpha == frob.beta {
            return Err(Error::Validation(format!(
                "ψ² ≠ 1 but ψ(℘) = ψ(℘̄) at p = {p}: the weight-one form is not classical-regular"
            )));
        }
        let maximal = field.order(1)?;
        let level = LevelData {
            n,
            n_e,
            dk,
            c,
            h_c: order.class_number(),
            w_c: if c == 1 { field.w() } else { 2 },
            shared_primes: prime_divisors(gcd_u(dk, n_e)).len() as u32,
        };
        Ok(FactorScenario {
            a_p: curve.trace_ap(p)?,
            curve,
            p,
            level,
            h_k: maximal.class_number(),
            g_k: maximal.class_group().genus_number(),
            euler,
            psi_heegner,
            psi_pbar: frob.beta,
            psi,
        })
    }

    /// ψ²(℘̄).
    pub fn psi_sq_pbar(&self) -> Cyclo {
        &self.psi_pbar * &self.psi_pbar
    }

    /// Whether N = D_K c², so that no Petersson discrepancy arises.
    pub fn pet_is_trivial(&self) -> bool {
        self.level.n == self.level.dk * self.level.c * self.level.c
    }

    pub fn theorem_applies(&self) -> bool {
        self.level.dk == self.level.n_e && self.level.c == 1
    }

    pub fn prime_level_applies(&self) -> bool {
        self.theorem_applies() && is_prime(self.level.n_e) && self.psi.is_trivial()
    }

    /// 𝔣_∞(−1) with ψ(𝔑) substituted.
    pub fn f_infty_minus_one(&self) -> Result<Cyclo> {
        let m = f_infty_closed(&self.level, -1)?;
        let (coeff, w) = m
            .as_rational_in_w(self.level.dk)
            .ok_or_else(|| Error::Internal("𝔣_∞(−1) retained a transcendental symbol".into()))?;
        Ok(self.psi_heegner.pow(w)?.scale(&coeff))
    }

    /// 𝔣_p(f, ψ) at this scenario.
    pub fn bdp_fudge(&self) -> Cyclo {
        bdp_fudge(self.a_p, &self.psi_pbar, self.p)
    }

    /// 𝔣_p(ψ²) with ψ^{−2}(℘̄) as the Frobenius value.
    pub fn katz_fudge(&self) -> Result<Cyclo> {
        let x = self.psi_sq_pbar().inverse()?;
        Ok(katz_fudge(self.psi.pow(2).is_trivial(), &x, self.p, self.level.c))
    }
}

/// 𝔣_p(f, ψ) = (1 − ψ(℘̄) a_p/p + ψ²(℘̄)/p)².
pub fn bdp_fudge(a_p: i64, psi_pbar: &Cyclo, p: u64) -> Cyclo {
    let pi = BigRational::new(1.into(), (p as i64).into());
    let inner = &(&Cyclo::one() - &psi_pbar.scale(&(int(a_p) * &pi))) + &(psi_pbar * psi_pbar).scale(&pi);
    &inner * &inner
}

/// Katz fudge 𝔣_p(χ): (1/p − 1)/2 for χ = 1, else −(1 − x)(1 − x/p)/(24c) with x = χ(℘̄).
pub fn katz_fudge(trivial: bool, x: &Cyclo, p: u64, c: u64) -> Cyclo {
    if trivial {
        return Cyclo::from_rational((BigRational::new(1.into(), (p as i64).into()) - int(1)) / int(2));
    }
    let one = Cyclo::one();
    let a = &one - x;
    let b = &one - &x.scale(&BigRational::new(1.into(), (p as i64).into()));
    (&a * &b).scale(&BigRational::new((-1).into(), (24 * c as i64).into()))
}

/// λ with its ingredients.
#[derive(Clone, Debug)]
pub struct LambdaValue {
    pub value: Cyclo,
    pub eul_n: Cyclo,
    pub eul_hr: Cyclo,
    pub eul_pet: Cyclo,
    /// Set when ℰul^Pet was computed from the local-ratio reconstruction (N > D_K c²).
    pub pet_reconstructed: bool,
    pub e_c: BigRational,
    pub f_infty: Cyclo,
    pub bdp_fudge: Cyclo,
    pub katz_fudge: Cyclo,
}

impl LambdaValue {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "value": self.value.to_string(),
            "eul_n": self.eul_n.to_string(),
            "eul_hr": self.eul_hr.to_string(),
            "eul_pet": self.eul_pet.to_string(),
            "pet_reconstructed": self.pet_reconstructed,
            "e_c": self.e_c.to_string(),
            "f_infty": self.f_infty.to_string(),
            "bdp_fudge": self.bdp_fudge.to_string(),
            "katz_fudge": self.katz_fudge.to_string(),
        })
    }
}

/// λ = ℰul_N(−1)·𝔣_∞(−1)·𝔣_p(f, ψ)/𝔣_p(ψ²), with ℰul^Pet(−1) computed.
pub fn lambda_general(s: &FactorScenario) -> Result<LambdaValue> {
    lambda_general_with_pet(s, None)
}

/// As [`lambda_general`], with ℰul^Pet(−1) supplied instead of computed.
pub fn lambda_general_with_pet(s: &FactorScenario, eul_pet: Option<&Cyclo>) -> Result<LambdaValue> {
    let katz = s.katz_fudge()?;
    if katz.is_zero() {
        return Err(Error::Degenerate(format!(
            "Katz fudge 𝔣_p(ψ²) vanishes: ψ²(℘̄) = {} at p = {}",
            s.psi_sq_pbar(),
            s.p
        )));
    }
    let hr = s.euler.euler_hr(-1)?;
    let pet = match eul_pet {
        Some(v) => v.clone(),
        None => s.euler.euler_pet(-1)?.value,
    };
    if pet.is_zero() {
        return Err(Error::Degenerate("ℰul^Pet(−1) vanishes".into()));
    }
    let ec = e_c(&s.psi);
    let eul_n = hr.value.div(&pet.scale(&ec))?;
    let f_inf = s.f_infty_minus_one()?;
    let bdp = s.bdp_fudge();
    let value = (&(&eul_n * &f_inf) * &bdp).div(&katz)?;
    if value.is_zero() {
        return Err(Error::Degenerate("λ vanishes: 𝔣_p(f, ψ) = 0 or ℰul^HR(−1) = 0".into()));
    }
    Ok(LambdaValue {
        value,
        eul_n,
        eul_hr: hr.value,
        eul_pet: pet,
        pet_reconstructed: eul_pet.is_none() && !s.pet_is_trivial(),
        e_c: ec,
        f_infty: f_inf,
        bdp_fudge: bdp,
        katz_fudge: katz,
    })
}

/// λ₀: 1/(p − 1) when ψ² = 1, else 12/(p − (p+1)ψ^{−2}(℘̄) + ψ^{−4}(℘̄)).
pub fn lambda_zero(s: &FactorScenario) -> Result<Cyclo> {
    let p = s.p as i64;
    if s.psi.pow(2).is_trivial() {
        return Ok(Cyclo::from_rational(BigRational::new(1.into(), (p - 1).into())));
    }
    let x = s.psi_sq_pbar().inverse()?;
    let den = &(&Cyclo::from_int(p) - &x.scale(&int(p + 1))) + &(&x * &x);
    if den.is_zero() {
        return Err(Error::Degenerate("cuspidal λ₀ denominator vanishes".into()));
    }
    Cyclo::from_int(12).div(&den)
}

/// λ = (p − a_p ψ(℘̄) + ψ²(℘̄))²/p · λ₀/(h_K g_K), for D_K = N_E and c = 1.
pub fn lambda_theorem(s: &FactorScenario) -> Result<Cyclo> {
    if !s.theorem_applies() {
        return Err(Error::Unsupported(format!(
            "the closed formula needs D_K = N_E and c = 1 (D_K = {}, N_E = {}, c = {})",
            s.level.dk, s.level.n_e, s.level.c
        )));
    }
    let p = s.p as i64;
    let inner = &(&Cyclo::from_int(p) - &s.psi_pbar.scale(&int(s.a_p))) + &s.psi_sq_pbar();
    let sq = (&inner * &inner).scale(&BigRational::new(1.into(), p.into()));
    let l0 = lambda_zero(s)?;
    Ok((&sq * &l0).scale(&BigRational::new(1.into(), ((s.h_k * s.g_k) as i64).into())))
}

/// |E(F_p)|²/(p(p − 1)h_K), for prime N_E = D_K and ψ = 1.
pub fn lambda_prime_level(s: &FactorScenario) -> Result<BigRational> {
    if !s.prime_level_applies() {
        return Err(Error::Unsupported("the prime-level formula needs N_E = D_K prime, c = 1 and ψ = 1".into()));
    }
    let m = s.curve.count_points(s.p)? as i64;
    let p = s.p as i64;
    Ok(BigRational::new((m * m).into(), (p * (p - 1) * s.h_k as i64).into()))
}

/// The theorem formula at ψ = 1, g_K = 1 agrees with the prime-level formula
/// as a rational identity in (p, a_p, h_K), with |E(F_p)| = p + 1 − a_p.
pub fn prime_level_identity(seed: u64) -> Result<IdentityOutcome> {
    let theorem = |v: &[BigRational]| -> Option<BigRational> {
        let (p, a, h) = (&v[0], &v[1], &v[2]);
        let den = p * (p - int(1)) * h;
        if den.is_zero() {
            return None;
        }
        let inner = p - a + int(1);
        Some(&inner * &inner / p * (BigRational::one() / (p - int(1))) / h)
    };
    let prime_level = |v: &[BigRational]| -> Option<BigRational> {
        let (p, a, h) = (&v[0], &v[1], &v[2]);
        let den = p * (p - int(1)) * h;
        if den.is_zero() {
            return None;
        }
        let m = p + int(1) - a;
        Some(&m * &m / den)
    };
    verify_rational_identity(&theorem, &prime_level, 3, 4, seed)
}

/// λ embedded in Q_p through ζ_m ↦ Teichmüller roots of unity.
pub fn lambda_padic(value: &Cyclo, p: u64, prec: i64) -> Result<PadicNumber> {
    embed_cyclotomic(value, p, prec)
}

/// Predicted iterated integral λ·log²_{E,p}(P)/log_p(u).
#[derive(Clone, Debug)]
pub struct PredictedIntegral {
    pub value: PadicNumber,
    pub log_point: PadicNumber,
    pub torsion: bool,
}

pub fn predicted_integral(
    ctx: &FormalGroupContext,
    point: &CurvePoint<BigRational>,
    lambda: &PadicNumber,
    log_u: &PadicNumber,
) -> Result<PredictedIntegral> {
    if log_u.is_zero() {
        return Err(Error::Domain("log_p(u) = 0".into()));
    }
    let l = ctx.formal_log(point)?;
    let value = lambda.mul(&l.value).mul(&l.value).div(log_u)?;
    Ok(PredictedIntegral {
        value,
        log_point: l.value,
        torsion: l.torsion,
    })
}

/// As [`predicted_integral`] for a point given over Q_p.
pub fn predicted_integral_padic(
    ctx: &FormalGroupContext,
    point: &CurvePoint<PadicNumber>,
    lambda: &PadicNumber,
    log_u: &PadicNumber,
) -> Result<PredictedIntegral> {
    if log_u.is_zero() {
        return Err(Error::Domain("log_p(u) = 0".into()));
    }
    let l = ctx.formal_log_padic(point)?;
    let value = lambda.mul(&l.value).mul(&l.value).div(log_u)?;
    Ok(PredictedIntegral {
        value,
        log_point: l.value,
        torsion: l.torsion,
    })
}

/// ψ(𝔑) for a ramified Heegner prime is ±1 when ψ has conductor 1 and ψ² = 1 on it.
pub fn ramified_heegner_sign(s: &FactorScenario) -> Option<i64> {
    let ramified = s
        .euler
        .heegner
        .factors()
        .keys()
        .all(|q| matches!(q, PrimeIdeal::Ramified { .. }));
    if !ramified || s.euler.heegner == Ideal::unit() {
        return None;
    }
    s.psi_heegner.as_rational().map(|r| if r == int(1) { 1 } else { -1 })
}

/// λ_general with ℰul_N(−1) = 1 and 𝔣_∞(−1) = −1/(2 h_K g_K) against the closed
/// theorem formula, as rational functions of (p, a_p, b = ψ(℘̄)) with h_K g_K = 1.
/// `cuspidal` selects the ψ² ≠ 1 branch of both the Katz fudge and λ₀.
pub fn lambda_route_identity(cuspidal: bool, seed: u64) -> Result<IdentityOutcome> {
    let general = move |v: &[BigRational]| -> Option<BigRational> {
        let (p, a, b) = (&v[0], &v[1], &v[2]);
        if p.is_zero() || b.is_zero() {
            return None;
        }
        let inner = BigRational::one() - b * a / p + b * b / p;
        let bdp = &inner * &inner;
        let katz = if cuspidal {
            let x = BigRational::one() / (b * b);
            -(BigRational::one() - &x) * (BigRational::one() - &x / p) / int(24)
        } else {
            (BigRational::one() / p - int(1)) / int(2)
        };
        if katz.is_zero() {
            return None;
        }
        Some(BigRational::new((-1).into(), 2.into()) * bdp / katz)
    };
    let theorem = move |v: &[BigRational]| -> Option<BigRational> {
        let (p, a, b) = (&v[0], &v[1], &v[2]);
        if p.is_zero() || b.is_zero() {
            return None;
        }
        let inner = p - a * b + b * b;
        let l0 = if cuspidal {
            let x = BigRational::one() / (b * b);
            let den = p - (p + int(1)) * &x + &x * &x;
            if den.is_zero() {
                return None;
            }
            int(12) / den
        } else {
            if *p == int(1) {
                return None;
            }
            BigRational::one() / (p - int(1))
        };
        Some(&inner * &inner / p * l0)
    };
    verify_rational_identity(&general, &theorem, 3, 12, seed)
}
