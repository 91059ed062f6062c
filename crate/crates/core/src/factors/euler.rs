//! Euler-type interpolation factors 𝔢_HR, 𝔢_K, 𝔢_BDP, symbolically in
//! A = ψ_{2l+2}(℘) and α_f, and numerically over Q(ζ_m).

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::identity::{verify_rational_identity, IdentityOutcome};
use crate::exactalg::poly::RatFunc;
use crate::exactalg::rational::{int, pow};
use crate::exactalg::CyclotomicElement as Cyclo;

/// Variables of a [`SymbolicFactor`]: A = ψ_{2l+2}(℘) and the root α_f of X² − a_p X + p.
pub const VAR_A: usize = 0;
pub const VAR_ALPHA: usize = 1;
const NVARS: usize = 2;

/// Per-variable degree bound for the Euler identity: over the common
/// denominator α²A⁴(A² − p^{2l+1})(A² − p^{2l+2}) the numerator has degree at
/// most 12 in A and 4 in α.
pub const EULER_DEGREE_BOUND: u32 = 16;

/// An 𝔢-factor at weight index l as a rational function of (A, α_f), with
/// B = p^{2l+2}/A, β_f = p/α_f and a_p = α_f + β_f substituted.
#[derive(Clone, Debug)]
pub struct SymbolicFactor {
    pub name: &'static str,
    pub l: i64,
    pub p: u64,
    pub expr: RatFunc,
}

impl SymbolicFactor {
    /// Value at A and α_f; None at a pole.
    pub fn eval(&self, a: &BigRational, alpha_f: &BigRational) -> Option<BigRational> {
        self.expr.eval(&[a.clone(), alpha_f.clone()])
    }
}

fn check_l(l: i64) -> Result<()> {
    if l < -1 {
        return Err(Error::Domain(format!("weight index l = {l} < −1")));
    }
    Ok(())
}

fn c(r: BigRational) -> RatFunc {
    RatFunc::constant(NVARS, r)
}

fn one() -> RatFunc {
    RatFunc::int(NVARS, 1)
}

fn var_b(l: i64, p: u64) -> RatFunc {
    c(pow(&int(p as i64), 2 * l + 2)).div(&RatFunc::var(NVARS, VAR_A))
}

fn beta_f(p: u64) -> RatFunc {
    c(int(p as i64)).div(&RatFunc::var(NVARS, VAR_ALPHA))
}

fn pp(p: u64, e: i64) -> BigRational {
    pow(&int(p as i64), e)
}

/// 𝔢_HR(l) = (1 − α_f B p^{−l−2})² (1 − β_f B p^{−l−2})² / ((1 − B² p^{−2l−3})(1 − B² p^{−2l−2})).
pub fn e_hr(l: i64, p: u64) -> Result<SymbolicFactor> {
    check_l(l)?;
    let b = var_b(l, p);
    let x = pp(p, -(l + 2));
    let fa = one().sub(&RatFunc::var(NVARS, VAR_ALPHA).mul(&b).scale(&x));
    let fb = one().sub(&beta_f(p).mul(&b).scale(&x));
    let num = fa.pow(2).mul(&fb.pow(2));
    let b2 = b.pow(2);
    let e1 = one().sub(&b2.scale(&pp(p, -(2 * l + 3))));
    let e0 = one().sub(&b2.scale(&pp(p, -(2 * l + 2))));
    Ok(SymbolicFactor {
        name: "e_HR",
        l,
        p,
        expr: num.div(&e1.mul(&e0)),
    })
}

/// 𝔢_K(Φ_l) = (1 − A^{−2} p^{2l+2})(1 − B² p^{−2l−3}).
pub fn e_k(l: i64, p: u64) -> Result<SymbolicFactor> {
    check_l(l)?;
    let a = RatFunc::var(NVARS, VAR_A);
    let first = one().sub(&c(pp(p, 2 * l + 2)).div(&a.pow(2)));
    let second = one().sub(&var_b(l, p).pow(2).scale(&pp(p, -(2 * l + 3))));
    Ok(SymbolicFactor {
        name: "e_K",
        l,
        p,
        expr: first.mul(&second),
    })
}

/// 𝔢_BDP(Ψ_l) = (1 − a_p B p^{−2−l} + B² p^{−2l−3})².
pub fn e_bdp(l: i64, p: u64) -> Result<SymbolicFactor> {
    check_l(l)?;
    let b = var_b(l, p);
    let ap = RatFunc::var(NVARS, VAR_ALPHA).add(&beta_f(p));
    let inner = one()
        .sub(&ap.mul(&b).scale(&pp(p, -(l + 2))))
        .add(&b.pow(2).scale(&pp(p, -(2 * l + 3))));
    Ok(SymbolicFactor {
        name: "e_BDP",
        l,
        p,
        expr: inner.pow(2),
    })
}

/// The three pieces of 𝔢_HR at a numeric point: (numerator, ℰ₁, ℰ₀).
pub fn e_hr_parts(l: i64, p: u64, a_p: &Cyclo, b: &Cyclo) -> Result<(Cyclo, Cyclo, Cyclo)> {
    check_l(l)?;
    let x = pp(p, -(l + 2));
    // (1 − α_f B x)(1 − β_f B x) = 1 − a_p B x + p B² x²
    let b2 = b * b;
    let lin = &(&Cyclo::one() - &(a_p * b).scale(&x)) + &b2.scale(&(&x * &x * int(p as i64)));
    let num = &lin * &lin;
    let e1 = &Cyclo::one() - &b2.scale(&pp(p, -(2 * l + 3)));
    let e0 = &Cyclo::one() - &b2.scale(&pp(p, -(2 * l + 2)));
    Ok((num, e1, e0))
}

/// 𝔢_HR(l) at a_p and B = ψ_{2l+2}(℘̄).
pub fn e_hr_value(l: i64, p: u64, a_p: &Cyclo, b: &Cyclo) -> Result<Cyclo> {
    let (num, e1, e0) = e_hr_parts(l, p, a_p, b)?;
    let den = &e1 * &e0;
    if den.is_zero() {
        return Err(Error::Degenerate(format!(
            "ℰ₁(2l+3)ℰ₀(2l+3) vanishes at l = {l}, B = {b}"
        )));
    }
    num.div(&den)
}

/// 𝔢_K(Φ_l) at A = ψ_{2l+2}(℘).
pub fn e_k_value(l: i64, p: u64, a: &Cyclo) -> Result<Cyclo> {
    check_l(l)?;
    let a2inv = (a * a).inverse()?;
    let b = a.inverse()?.scale(&pp(p, 2 * l + 2));
    let first = &Cyclo::one() - &a2inv.scale(&pp(p, 2 * l + 2));
    let second = &Cyclo::one() - &(&b * &b).scale(&pp(p, -(2 * l + 3)));
    Ok(&first * &second)
}

/// 𝔢_BDP(Ψ_l) at a_p and B.
pub fn e_bdp_value(l: i64, p: u64, a_p: &Cyclo, b: &Cyclo) -> Result<Cyclo> {
    check_l(l)?;
    let inner = &(&Cyclo::one() - &(a_p * b).scale(&pp(p, -(l + 2)))) + &(b * b).scale(&pp(p, -(2 * l + 3)));
    Ok(&inner * &inner)
}

/// One numeric substitution of the Euler identity.
#[derive(Clone, Debug)]
pub struct EulerSample {
    pub a: BigRational,
    pub a_p: i64,
    pub lhs: Cyclo,
    pub rhs: Cyclo,
}

/// 𝔢_HR(l)·𝔢_K(l) = 𝔢_BDP(l), symbolically and at numeric points.
#[derive(Clone, Debug)]
pub struct EulerIdentityCheck {
    pub l: i64,
    pub p: u64,
    /// Grid verification of the rational-function identity in (A, α_f).
    pub outcome: IdentityOutcome,
    /// Cross-multiplied equality of the two rational functions.
    pub exact: bool,
    pub samples: Vec<EulerSample>,
}

impl EulerIdentityCheck {
    pub fn holds(&self) -> bool {
        self.outcome.holds && self.exact && self.samples.iter().all(|s| s.lhs == s.rhs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "l": self.l,
            "p": self.p,
            "grid_points": self.outcome.samples,
            "degree_bound": EULER_DEGREE_BOUND,
            "seed": self.outcome.seed,
            "exact": self.exact,
            "numeric_samples": self.samples.len(),
            "holds": self.holds(),
        })
    }
}

/// Checks the Euler identity at l for the prime p: the symbolic identity in
/// (A, α_f) plus `numeric` random substitutions of integer a_p and rational A.
pub fn verify_euler_identity(l: i64, p: u64, numeric: usize, seed: u64) -> Result<EulerIdentityCheck> {
    let hr = e_hr(l, p)?;
    let k = e_k(l, p)?;
    let bdp = e_bdp(l, p)?;
    let lhs = hr.expr.mul(&k.expr);
    let outcome = verify_rational_identity(&lhs, &bdp.expr, NVARS, EULER_DEGREE_BOUND, seed)?;
    let exact = lhs.equals(&bdp.expr);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let bound = 2 * (p as f64).sqrt() as i64 + 1;
    let mut samples = Vec::with_capacity(numeric);
    while samples.len() < numeric {
        let a = BigRational::new(rng.gen_range(-500i64..=500).into(), rng.gen_range(1i64..=40).into());
        let a_p = rng.gen_range(-bound..=bound);
        let ac = Cyclo::from_rational(a.clone());
        let Ok(b) = ac.inverse().map(|x| x.scale(&pp(p, 2 * l + 2))) else { continue };
        let apc = Cyclo::from_int(a_p);
        let (Ok(h), Ok(kv)) = (e_hr_value(l, p, &apc, &b), e_k_value(l, p, &ac)) else { continue };
        let rhs = e_bdp_value(l, p, &apc, &b)?;
        samples.push(EulerSample { a, a_p, lhs: &h * &kv, rhs });
    }
    Ok(EulerIdentityCheck { l, p, outcome, exact, samples })
}

/// 𝔢_K at A² = p^{2l+2}: the first factor vanishes.
pub fn e_k_boundary_zero(l: i64, p: u64) -> Result<bool> {
    let a = Cyclo::from_rational(pp(p, l + 1));
    Ok(e_k_value(l, p, &a)?.is_zero() && e_k_value(l, p, &(-a))?.is_zero())
}

/// B → 0 sends every ℰ-factor of 𝔢_HR to 1.
pub fn e_hr_at_zero(l: i64, p: u64) -> Result<bool> {
    Ok(e_hr_value(l, p, &Cyclo::from_int(1), &Cyclo::zero())?.is_one())
}
