//! Archimedean and volume factors 𝔣_HR, 𝔣_K, 𝔣_BDP, 𝔣_Pet and 𝔣_∞ as
//! monomials in the formal symbols π, √D_K, W = ψ_{2l+2}(𝔑) and G = l!(l+1)!.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::arith::{factorial, factorize};
use crate::exactalg::rational::{int, pow};

/// coeff · π^pi · √D_K^sqrt_dk · W^w · G^gamma.
///
/// G is kept formal only at l = −1, where l! has a pole; for l ≥ 0 it is
/// multiplied into the coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchMonomial {
    pub coeff: BigRational,
    pub pi: i64,
    pub sqrt_dk: i64,
    pub w: i64,
    pub gamma: i64,
}

impl ArchMonomial {
    pub fn rational(coeff: BigRational) -> Self {
        ArchMonomial { coeff, pi: 0, sqrt_dk: 0, w: 0, gamma: 0 }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ArchMonomial {
            coeff: &self.coeff * &o.coeff,
            pi: self.pi + o.pi,
            sqrt_dk: self.sqrt_dk + o.sqrt_dk,
            w: self.w + o.w,
            gamma: self.gamma + o.gamma,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.coeff.is_zero() {
            return Err(Error::Degenerate("inverting a zero factor".into()));
        }
        Ok(ArchMonomial {
            coeff: self.coeff.recip(),
            pi: -self.pi,
            sqrt_dk: -self.sqrt_dk,
            w: -self.w,
            gamma: -self.gamma,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        ArchMonomial { coeff: &self.coeff * r, ..self.clone() }
    }

    /// Folds even powers of √D_K into the coefficient, leaving exponent 0 or 1.
    pub fn normalized(&self, dk: u64) -> Self {
        let half = self.sqrt_dk.div_euclid(2);
        ArchMonomial {
            coeff: &self.coeff * pow(&int(dk as i64), half),
            sqrt_dk: self.sqrt_dk.rem_euclid(2),
            ..self.clone()
        }
    }

    pub fn same_value(&self, o: &Self, dk: u64) -> bool {
        self.normalized(dk) == o.normalized(dk)
    }

    /// The coefficient once π, √D_K and G have cancelled.
    pub fn as_rational_in_w(&self, dk: u64) -> Option<(BigRational, i64)> {
        let n = self.normalized(dk);
        (n.pi == 0 && n.sqrt_dk == 0 && n.gamma == 0).then_some((n.coeff, n.w))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "coeff": self.coeff.to_string(),
            "pi": self.pi,
            "sqrt_dk": self.sqrt_dk,
            "psi_heegner": self.w,
            "gamma_block": self.gamma,
            "text": self.to_string(),
        })
    }
}

impl fmt::Display for ArchMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        for (sym, e) in [("π", self.pi), ("√D_K", self.sqrt_dk), ("ψ(𝔑)", self.w), ("l!(l+1)!", self.gamma)] {
            if e != 0 {
                write!(f, "·{sym}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Level data entering the 𝔣-factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelData {
    pub n: u64,
    pub n_e: u64,
    pub dk: u64,
    pub c: u64,
    pub h_c: u64,
    pub w_c: u64,
    /// #{q | (D_K, N_E)}.
    pub shared_primes: u32,
}

/// [SL₂(Z) : Γ₀(N)] = ∏ q^{n−1}(q + 1).
pub fn sl2_index(n: u64) -> u64 {
    factorize(n).into_iter().map(|(q, e)| q.pow(e - 1) * (q + 1)).product()
}

fn two_pow(e: i64) -> BigRational {
    pow(&int(2), e)
}

fn fact(n: i64) -> BigRational {
    BigRational::from_integer(factorial(n as u64))
}

/// l!(l+1)! as a coefficient for l ≥ 0, or the formal symbol G at l = −1.
fn gamma_block(l: i64) -> ArchMonomial {
    if l >= 0 {
        ArchMonomial::rational(fact(l) * fact(l + 1))
    } else {
        ArchMonomial { gamma: 1, ..ArchMonomial::rational(BigRational::one()) }
    }
}

fn check_l(l: i64) -> Result<()> {
    if l < -1 {
        return Err(Error::Domain(format!("weight index l = {l} < −1")));
    }
    Ok(())
}

fn sign(l: i64) -> BigRational {
    if l.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// 𝔣_HR(l) = (−1)^l l!(l+1)! N / (2^{4l+5} π^{2l+3} √D_K).
pub fn f_hr(lv: &LevelData, l: i64) -> Result<ArchMonomial> {
    check_l(l)?;
    let base = ArchMonomial {
        coeff: sign(l) * int(lv.n as i64) / two_pow(4 * l + 5),
        pi: -(2 * l + 3),
        sqrt_dk: -1,
        w: 0,
        gamma: 0,
    };
    Ok(base.mul(&gamma_block(l)))
}

/// 𝔣_K(Φ_l) = (2π/√D_K)^{2l+1} (2l+2)!.
pub fn f_k(l: i64) -> Result<ArchMonomial> {
    check_l(l)?;
    Ok(ArchMonomial {
        coeff: two_pow(2 * l + 1) * fact(2 * l + 2),
        pi: 2 * l + 1,
        sqrt_dk: -(2 * l + 1),
        w: 0,
        gamma: 0,
    })
}

/// ω(f, Ψ_l) = (−1/N)^{l+1} ψ_{2l+2}(𝔑), with ψ_{2l+2}(𝔑) in the numerator.
pub fn omega(lv: &LevelData, l: i64) -> Result<ArchMonomial> {
    check_l(l)?;
    Ok(ArchMonomial {
        coeff: pow(&BigRational::new((-1).into(), (lv.n as i64).into()), l + 1),
        w: 1,
        ..ArchMonomial::rational(BigRational::one())
    })
}

/// 𝔣_BDP(Ψ_l) = (2π/(c√D_K))^{2l+1} l!(l+1)! 2^{#q | (D_K, N_E)} ω(f, Ψ_l)^{−1}.
pub fn f_bdp(lv: &LevelData, l: i64) -> Result<ArchMonomial> {
    check_l(l)?;
    let base = ArchMonomial {
        coeff: two_pow(2 * l + 1) * pow(&int(lv.c as i64), -(2 * l + 1)) * two_pow(lv.shared_primes as i64),
        pi: 2 * l + 1,
        sqrt_dk: -(2 * l + 1),
        w: 0,
        gamma: 0,
    };
    base.mul(&gamma_block(l)).div(&omega(lv, l)?)
}

/// 𝔣_Pet(l) = [ℑ(N)/ℑ(D_K c²)] (2l+2)!/(2^{4l+4} π^{2l+3}) · h_c √(D_K c²)/w_c.
pub fn f_pet(lv: &LevelData, l: i64) -> Result<ArchMonomial> {
    check_l(l)?;
    let idx = BigRational::new(sl2_index(lv.n).into(), sl2_index(lv.dk * lv.c * lv.c).into());
    Ok(ArchMonomial {
        coeff: idx * fact(2 * l + 2) / two_pow(4 * l + 4) * int(lv.h_c as i64) * int(lv.c as i64) / int(lv.w_c as i64),
        pi: -(2 * l + 3),
        sqrt_dk: 1,
        w: 0,
        gamma: 0,
    })
}

/// Closed form 𝔣_∞(l) = −[ℑ(D_K c²)/ℑ(N)] · N 2^{−#q | (D_K, N_E)}/(h_c D_K) · ψ_{2l+2}(𝔑)/(c^{−2l} N^{l+1}).
pub fn f_infty_closed(lv: &LevelData, l: i64) -> Result<ArchMonomial> {
    check_l(l)?;
    let idx = BigRational::new(sl2_index(lv.dk * lv.c * lv.c).into(), sl2_index(lv.n).into());
    let n = int(lv.n as i64);
    let coeff = -idx * &n * two_pow(-(lv.shared_primes as i64)) / (int(lv.h_c as i64) * int(lv.dk as i64))
        * pow(&int(lv.c as i64), 2 * l)
        / pow(&n, l + 1);
    Ok(ArchMonomial { coeff, w: 1, ..ArchMonomial::rational(BigRational::one()) })
}

/// 𝔣_HR 𝔣_K / (𝔣_BDP 𝔣_Pet), with 𝔣_Pet optionally scaled (a test hook).
pub fn f_infty_assembled(lv: &LevelData, l: i64, pet_scale: &BigRational) -> Result<ArchMonomial> {
    let num = f_hr(lv, l)?.mul(&f_k(l)?);
    let den = f_bdp(lv, l)?.mul(&f_pet(lv, l)?.scale(pet_scale));
    num.div(&den)
}

/// Closed form against the assembled quotient at one l.
#[derive(Clone, Debug)]
pub struct AssemblyCheck {
    pub l: i64,
    pub closed: ArchMonomial,
    pub assembled: ArchMonomial,
    /// π-degree of the assembled quotient.
    pub pi_degree: i64,
    pub holds: bool,
}

impl AssemblyCheck {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "l": self.l,
            "closed": self.closed.to_json(),
            "assembled": self.assembled.to_json(),
            "pi_degree": self.pi_degree,
            "holds": self.holds,
        })
    }
}

pub fn verify_assembly(lv: &LevelData, l: i64, pet_scale: &BigRational) -> Result<AssemblyCheck> {
    let closed = f_infty_closed(lv, l)?;
    let assembled = f_infty_assembled(lv, l, pet_scale)?;
    let pi_degree = assembled.pi;
    let holds = pi_degree == 0 && assembled.gamma == 0 && closed.same_value(&assembled, lv.dk);
    Ok(AssemblyCheck {
        l,
        closed: closed.normalized(lv.dk),
        assembled: assembled.normalized(lv.dk),
        pi_degree,
        holds,
    })
}

/// −1/(2 h_K g_K).
pub fn f_infty_theorem_value(h_k: u64, g_k: u64) -> BigRational {
    BigRational::new((-1).into(), (2 * h_k * g_k).into())
}
