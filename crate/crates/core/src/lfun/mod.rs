//! Euler factors: Hecke roots, Rankin local factors, the bad Euler ratios at
//! primes dividing the level, and truncated Dirichlet series.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::arith::{factorize, lcm_u, prime_divisors};
use crate::exactalg::rational::{int, pow};
use crate::exactalg::{BigComplex, CyclotomicElement, NumCtx};
use crate::heckechar::{InfinityTypeCharacter, RingClassCharacter};
use crate::quadfield::{Ideal, Kind, PrimeIdeal, QuadNum};

type Cyclo = CyclotomicElement;

/// How α was singled out among the two roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLabel {
    /// q divides the level: (α, β) = (a_q, 0).
    Bad,
    /// α is the q-adic unit root for the embedding sending √d to `sqrt_residue` mod q.
    Ordinary { d: i64, sqrt_residue: u64 },
    /// Equal q-adic valuations: α has complex argument in [0, π), ties broken
    /// by cyclotomic coordinates.
    Argument,
    /// Supplied directly as character values.
    Given,
}

/// The two roots of X² − a_q X + χ(q) q^{k−1}.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeRoots {
    pub q: u64,
    pub k: u32,
    pub alpha: Cyclo,
    pub beta: Cyclo,
    pub label: RootLabel,
}

impl HeckeRoots {
    pub fn bad(q: u64, k: u32, a_q: Cyclo) -> Self {
        HeckeRoots {
            q,
            k,
            alpha: a_q,
            beta: Cyclo::zero(),
            label: RootLabel::Bad,
        }
    }

    pub fn given(q: u64, k: u32, alpha: Cyclo, beta: Cyclo) -> Self {
        HeckeRoots {
            q,
            k,
            alpha,
            beta,
            label: RootLabel::Given,
        }
    }

    pub fn sum(&self) -> Cyclo {
        &self.alpha + &self.beta
    }

    pub fn product(&self) -> Cyclo {
        &self.alpha * &self.beta
    }
}

/// √r as an element of a cyclotomic field, via the quadratic Gauss sum.
pub fn sqrt_rational(r: &BigRational) -> Cyclo {
    if r.is_zero() {
        return Cyclo::zero();
    }
    // r = (n/d) = n d / d², then n d = s² · t with t squarefree.
    let nd = r.numer() * r.denom();
    let mut s = BigInt::one();
    let mut t = BigInt::from(if nd.is_negative() { -1 } else { 1 });
    let mut rest = nd.abs();
    let mut q = BigInt::from(2);
    while &q * &q <= rest {
        let mut e = 0u32;
        while (&rest % &q).is_zero() {
            rest /= &q;
            e += 1;
        }
        s *= q.pow(e / 2);
        if e % 2 == 1 {
            t *= &q;
        }
        q += 1;
    }
    t *= rest;
    let scale = BigRational::new(s, r.denom().clone());
    if t.is_one() {
        return Cyclo::from_rational(scale);
    }
    let t = i64::try_from(t).expect("squarefree part fits in i64");
    // Fundamental discriminant of Q(√t) and √t in terms of it.
    let (disc, half) = if t.rem_euclid(4) == 1 { (t, false) } else { (4 * t, true) };
    let y = if half { &scale / int(2) } else { scale };
    QuadNum::new(disc, BigRational::zero(), y)
        .to_cyclotomic()
        .expect("quadratic Gauss sum")
}

fn arg_in_upper(z: (f64, f64)) -> bool {
    let t = z.1.atan2(z.0);
    t >= -1e-12 && t < std::f64::consts::PI - 1e-12
}

fn coords_cmp(a: &Cyclo, b: &Cyclo) -> Ordering {
    let n = lcm_u(a.order(), b.order());
    let (a, b) = (a.lift(n), b.lift(n));
    a.coeffs().partial_cmp(b.coeffs()).unwrap_or(Ordering::Equal)
}

/// Orders (r1, r2) by the argument rule.
fn by_argument(r1: Cyclo, r2: Cyclo) -> (Cyclo, Cyclo) {
    let (u1, u2) = (arg_in_upper(r1.to_c64()), arg_in_upper(r2.to_c64()));
    let first = match (u1, u2) {
        (true, false) => true,
        (false, true) => false,
        _ => {
            let (t1, t2) = (r1.to_c64(), r2.to_c64());
            let (a1, a2) = (t1.1.atan2(t1.0), t2.1.atan2(t2.0));
            if (a1 - a2).abs() > 1e-12 {
                a1 < a2
            } else {
                coords_cmp(&r1, &r2) != Ordering::Less
            }
        }
    };
    if first {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

fn is_root(x: &Cyclo, a: &Cyclo, c: &Cyclo) -> bool {
    (&(x * x) - &(&(a * x) - c)).is_zero()
}

/// Roots of X² − a_q X + χ(q) q^{k−1}, labelled so that ord_q(α) ≤ ord_q(β).
///
/// χ(q) = 0 marks q as dividing the level and returns (a_q, 0).
pub fn hecke_roots(a_q: &Cyclo, chi_q: &Cyclo, q: u64, k: u32) -> Result<HeckeRoots> {
    if chi_q.is_zero() {
        return Ok(HeckeRoots::bad(q, k, a_q.clone()));
    }
    if k == 0 {
        return Err(Error::Domain("Hecke polynomial needs weight k ≥ 1".into()));
    }
    let qk = pow(&int(q as i64), k as i64 - 1);
    let c = chi_q.scale(&qk);
    if let (Some(a), Some(cr)) = (a_q.as_rational(), c.as_rational()) {
        return rational_roots(&a, &cr, q, k);
    }
    // Roots of unity times √(q^{k−1}).
    let t = sqrt_rational(&qk);
    let m = 2 * lcm_u(lcm_u(a_q.order(), chi_q.order()), 2);
    let mut found = Vec::new();
    for j in 0..m {
        let x = &Cyclo::zeta_pow(m, j as i64) * &t;
        if is_root(&x, a_q, &c) {
            found.push(x);
        }
    }
    let (r1, r2) = match found.len() {
        1 => (found[0].clone(), found[0].clone()),
        2 => (found[0].clone(), found[1].clone()),
        _ => {
            return Err(Error::Unsupported(format!(
                "roots of X² − ({a_q})X + {c} are not roots of unity times √{q}^{}",
                k - 1
            )))
        }
    };
    let (alpha, beta) = by_argument(r1, r2);
    Ok(HeckeRoots {
        q,
        k,
        alpha,
        beta,
        label: RootLabel::Argument,
    })
}

fn rational_roots(a: &BigRational, c: &BigRational, q: u64, k: u32) -> Result<HeckeRoots> {
    let disc = a * a - int(4) * c;
    let s = sqrt_rational(&disc);
    let half = BigRational::new(1.into(), 2.into());
    let ac = Cyclo::from_rational(a.clone());
    let r1 = (&ac + &s).scale(&half);
    let r2 = (&ac - &s).scale(&half);
    let ordinary = a.denom().is_one() && !(a.numer() % BigInt::from(q)).is_zero() && k >= 2;
    if ordinary && s.as_rational().is_none() {
        // disc ≡ a² mod q, so √d has a q-adic image r with s·r ≡ a.
        let (sc, d) = squarefree_split(&disc);
        let qi = BigInt::from(q);
        let target = a.numer().mod_floor(&qi);
        let sc_mod = (sc.numer() * modinv(sc.denom(), &qi)).mod_floor(&qi);
        let residue = (0..q)
            .find(|&r| {
                let rr = BigInt::from(r);
                (&rr * &rr - BigInt::from(d)).mod_floor(&qi).is_zero() && (&sc_mod * &rr).mod_floor(&qi) == target
            })
            .ok_or_else(|| Error::Internal(format!("no q-adic square root of {d} at {q}")))?;
        return Ok(HeckeRoots {
            q,
            k,
            alpha: r1,
            beta: r2,
            label: RootLabel::Ordinary { d, sqrt_residue: residue },
        });
    }
    if ordinary {
        // Rational roots: the unit root is the one prime to q.
        let qv = |r: &Cyclo| {
            let r = r.as_rational().expect("rational root");
            crate::exactalg::rational::valuation(&r, q)
        };
        let (alpha, beta) = if qv(&r1) <= qv(&r2) { (r1, r2) } else { (r2, r1) };
        return Ok(HeckeRoots {
            q,
            k,
            alpha,
            beta,
            label: RootLabel::Ordinary { d: 1, sqrt_residue: 1 },
        });
    }
    let (alpha, beta) = by_argument(r1, r2);
    Ok(HeckeRoots {
        q,
        k,
        alpha,
        beta,
        label: RootLabel::Argument,
    })
}

fn modinv(d: &BigInt, q: &BigInt) -> BigInt {
    let e = d.extended_gcd(q);
    e.x.mod_floor(q)
}

/// r = sc² · d with d a squarefree integer; returns (sc, d).
fn squarefree_split(r: &BigRational) -> (BigRational, i64) {
    let nd = r.numer() * r.denom();
    let sign: i64 = if nd.is_negative() { -1 } else { 1 };
    let n = u64::try_from(nd.abs()).expect("discriminant fits in u64");
    let mut s = 1u64;
    let mut d = 1u64;
    for (p, e) in factorize(n) {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
    }
    (
        BigRational::new(BigInt::from(s), r.denom().clone()),
        sign * d as i64,
    )
}

/// Euler polynomial at q in X = q^{−s}, constant term 1.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactor {
    pub q: u64,
    pub coeffs: Vec<Cyclo>,
}

impl LocalFactor {
    pub fn from_roots(q: u64, roots: &[Cyclo]) -> Self {
        let mut coeffs = vec![Cyclo::one()];
        for r in roots {
            let mut next = coeffs.clone();
            next.push(Cyclo::zero());
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] - &(c * r);
            }
            coeffs = next;
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LocalFactor { q, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Cyclo) -> Cyclo {
        let mut acc = Cyclo::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Value at s, i.e. at X = q^{−s}.
    pub fn at_s(&self, s: i64) -> Cyclo {
        self.eval(&Cyclo::from_rational(pow(&int(self.q as i64), -s)))
    }

    /// Coefficients of 1/P(X) up to X^n.
    pub fn inverse_series(&self, n: usize) -> Vec<Cyclo> {
        let mut out = vec![Cyclo::one()];
        for m in 1..=n {
            let mut acc = Cyclo::zero();
            for (j, c) in self.coeffs.iter().enumerate().skip(1).take(m) {
                acc = &acc - &(c * &out[m - j]);
            }
            out.push(acc);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        use crate::qexp::Coeff;
        serde_json::json!({
            "q": self.q,
            "coeffs": self.coeffs.iter().map(|c| Coeff::to_json(c)).collect::<Vec<_>>(),
        })
    }
}

/// ∏ (1 − ρσX) over ρ ∈ {α_g, β_g}, σ ∈ {α_f, β_f}.
pub fn rankin_local_factor(g: &HeckeRoots, f: &HeckeRoots) -> LocalFactor {
    let mut roots = Vec::with_capacity(4);
    for r in [&g.alpha, &g.beta] {
        for s in [&f.alpha, &f.beta] {
            roots.push(r * s);
        }
    }
    LocalFactor::from_roots(g.q, &roots)
}

/// Data for the Euler factors at primes dividing N = lcm(D_K c², N_E).
#[derive(Clone, Debug)]
pub struct EulerData {
    pub psi: RingClassCharacter,
    pub n_e: u64,
    /// a_q(f) for every prime q | N.
    pub a_f: BTreeMap<u64, i64>,
    /// Cyclic ideal of norm N_E.
    pub heegner: Ideal,
}

/// A bad Euler ratio with its local contributions.
#[derive(Clone, Debug)]
pub struct EulerValue {
    pub value: Cyclo,
    pub local: Vec<(u64, Cyclo)>,
    pub nonvanishing: bool,
}

impl EulerValue {
    fn from_local(local: Vec<(u64, Cyclo)>) -> Self {
        let value = local.iter().fold(Cyclo::one(), |acc, (_, v)| &acc * v);
        EulerValue {
            nonvanishing: !value.is_zero(),
            value,
            local,
        }
    }
}

impl EulerData {
    pub fn new(psi: RingClassCharacter, n_e: u64, a_f: BTreeMap<u64, i64>) -> Result<Self> {
        let heegner = psi
            .order_ctx()
            .heegner_ideal(n_e)?
            .ok_or_else(|| Error::Validation(format!("no cyclic ideal of norm {n_e} in the order of conductor {}", psi.conductor())))?;
        let data = EulerData { psi, n_e, a_f, heegner };
        for q in data.primes() {
            if !data.a_f.contains_key(&q) {
                return Err(Error::Validation(format!("a_{q}(f) missing")));
            }
        }
        Ok(data)
    }

    pub fn level(&self) -> u64 {
        let c = self.psi.conductor();
        lcm_u(self.psi.field().d() * c * c, self.n_e)
    }

    pub fn primes(&self) -> Vec<u64> {
        prime_divisors(self.level())
    }

    fn dk(&self) -> u64 {
        self.psi.field().d()
    }

    fn a_q(&self, q: u64) -> i64 {
        self.a_f[&q]
    }

    /// Roots of f at q: (a_q, 0) for q | N_E, else the labelled Hecke roots.
    pub fn f_roots(&self, q: u64) -> Result<HeckeRoots> {
        let a = Cyclo::from_int(self.a_q(q));
        if self.n_e % q == 0 {
            return Ok(HeckeRoots::bad(q, 2, a));
        }
        hecke_roots(&a, &Cyclo::one(), q, 2)
    }

    /// ψ_{2l+2}(𝔞): ψ itself at l = −1, otherwise ψ times the infinity-type
    /// character (0, 2l+2), which needs h_K = 1 and ψ = 1.
    pub fn family_value(&self, a: &Ideal, l: i64) -> Result<Cyclo> {
        if l == -1 {
            return self.psi.evaluate(a);
        }
        if l < -1 {
            return Err(Error::Domain(format!("l = {l} < −1")));
        }
        if !self.psi.is_trivial() || self.psi.conductor() != 1 {
            return Err(Error::Unsupported(
                "ψ_{2l+2} for l ≥ 0 is implemented for ψ = 1 on class number one".into(),
            ));
        }
        let chi = InfinityTypeCharacter::new(self.psi.field(), (2 * l + 2) as u32)?;
        chi.evaluate(a)?.to_cyclotomic()
    }

    /// Roots of g_{2l+3} = θ_{ψ_{2l+2}} at q | N, with α(ğ) first:
    /// α = value on the prime dividing the Heegner ideal at split q.
    pub fn g_roots(&self, q: u64, l: i64) -> Result<HeckeRoots> {
        let k = (2 * l + 3) as u32;
        if self.psi.conductor() % q == 0 {
            return Ok(HeckeRoots::bad(q, k, Cyclo::zero()));
        }
        let s = self.psi.order_ctx().splitting(q)?;
        match s.kind {
            Kind::Ramified => {
                let v = self.family_value(&Ideal::prime(PrimeIdeal::Ramified { q }), l)?;
                Ok(HeckeRoots::bad(q, k, v))
            }
            Kind::Split => {
                let up = PrimeIdeal::Split { q, conj: false };
                let first = if self.heegner.factors().contains_key(&up) { up } else { up.conj() };
                let a = self.family_value(&Ideal::prime(first), l)?;
                let b = self.family_value(&Ideal::prime(first.conj()), l)?;
                Ok(HeckeRoots::given(q, k, a, b))
            }
            Kind::Inert => Err(Error::Unsupported(format!(
                "{q} | N is inert in K and prime to c; the Heegner hypothesis fails"
            ))),
        }
    }

    /// ℰul_N(s) in closed form: the ratio L^{(q)}(ğ × f̆, s)/L^{(q)}(f, ψ, s) over q | N.
    pub fn euler_ratio_bad(&self, s: i64) -> Result<EulerValue> {
        let dk = self.dk();
        let c = self.psi.conductor();
        let mut local = Vec::new();
        for q in self.primes() {
            let x = Cyclo::from_rational(pow(&int(q as i64), -s));
            let one = Cyclo::one();
            let v = if c % q == 0 {
                one
            } else if dk % q == 0 && self.n_e % q != 0 {
                // 1 − β_f ψ(𝔮) q^{−s}
                let eps = self.psi.evaluate(&Ideal::prime(PrimeIdeal::Ramified { q }))?;
                let f = self.f_roots(q)?;
                &one - &(&(&f.beta * &eps) * &x)
            } else if dk % q != 0 {
                // q | N_E splits; the factor at the prime not dividing the Heegner ideal survives
                let g = self.g_roots(q, -1)?;
                &one - &(&g.beta.scale(&int(self.a_q(q))) * &x)
            } else {
                one
            };
            local.push((q, v));
        }
        Ok(EulerValue::from_local(local))
    }

    /// ℰul^HR(l): Rankin local factor of (θ_{ψ_{2l+2}}, f) at q | N over the
    /// level-N factor (1 − α(f̆)α(ğ) q^{−s}), evaluated at s = l + 2.
    pub fn euler_hr(&self, l: i64) -> Result<EulerValue> {
        let s = l + 2;
        let mut local = Vec::new();
        for q in self.primes() {
            let g = self.g_roots(q, l)?;
            let f = self.f_roots(q)?;
            let full = rankin_local_factor(&g, &f).at_s(s);
            let lev = LocalFactor::from_roots(q, &[&f.alpha * &g.alpha]).at_s(s);
            local.push((q, full.div(&lev)?));
        }
        Ok(EulerValue::from_local(local))
    }

    /// ℰul^Pet(l) = ∏_{q | N, q ∤ D_K c²} (1 − α²q^{−k})(1 − β²q^{−k}) q/(q+1), k = 2l+3.
    pub fn euler_pet(&self, l: i64) -> Result<EulerValue> {
        let k = 2 * l + 3;
        let c = self.psi.conductor();
        let base = self.dk() * c * c;
        let mut local = Vec::new();
        for q in self.primes() {
            if base % q == 0 {
                continue;
            }
            let g = self.g_roots(q, l)?;
            let qk = Cyclo::from_rational(pow(&int(q as i64), -k));
            let one = Cyclo::one();
            let a = &one - &(&(&g.alpha * &g.alpha) * &qk);
            let b = &one - &(&(&g.beta * &g.beta) * &qk);
            let v = (&a * &b).scale(&BigRational::new(q.into(), (q + 1).into()));
            local.push((q, v));
        }
        Ok(EulerValue::from_local(local))
    }

    /// ℰul_N(l) = ℰul^HR(l) / (E_c · ℰul^Pet(l)).
    pub fn euler_n(&self, l: i64) -> Result<Cyclo> {
        let hr = self.euler_hr(l)?;
        let pet = self.euler_pet(l)?;
        let ec = e_c(&self.psi);
        if !pet.nonvanishing {
            return Err(Error::Degenerate(format!("ℰul^Pet({l}) vanishes")));
        }
        hr.value.div(&pet.value.scale(&ec))
    }

    /// Literal product: numerator over q | (N_E, D_K) of (1 + 1/q), over q ∥ N_E, q ∤ D_K of
    /// (1 − a_q/q)², over q | D_K, q ∤ N_E of (1 − a_q(f)a_q(g)/q + 1/q); denominator over
    /// q | N of (1 − α(f̆)α(ğ)/q). Primes dividing c contribute 1.
    pub fn euler_ratio_literal(&self) -> Result<EulerValue> {
        let dk = self.dk();
        let c = self.psi.conductor();
        let mut local = Vec::new();
        for q in self.primes() {
            if c % q == 0 {
                local.push((q, Cyclo::one()));
                continue;
            }
            let qi = Cyclo::from_rational(BigRational::new(1.into(), q.into()));
            let one = Cyclo::one();
            let a = Cyclo::from_int(self.a_q(q));
            let g = self.g_roots(q, -1)?;
            let f = self.f_roots(q)?;
            let num = if self.n_e % q == 0 && dk % q == 0 {
                &one + &qi
            } else if self.n_e % q == 0 {
                if (self.n_e / q) % q == 0 {
                    one.clone()
                } else {
                    let t = &one - &(&a * &qi);
                    &t * &t
                }
            } else {
                &(&one - &(&(&a * &g.alpha) * &qi)) + &qi
            };
            let den = &one - &(&(&f.alpha * &g.alpha) * &qi);
            local.push((q, num.div(&den)?));
        }
        Ok(EulerValue::from_local(local))
    }
}

/// E_c = ∏_{q | c} (q − χ_K(q))/(q − 1).
pub fn e_c(psi: &RingClassCharacter) -> BigRational {
    let c = psi.conductor();
    let k = psi.field();
    prime_divisors(c)
        .into_iter()
        .map(|q| BigRational::new((q as i64 - k.chi(q as i64) as i64).into(), (q as i64 - 1).into()))
        .fold(BigRational::one(), |a, b| a * b)
}

/// Truncated Dirichlet series Σ_{n ≤ terms} a_n n^{−s} with a crude tail bound.
#[derive(Clone, Debug)]
pub struct PartialSum {
    pub value: BigComplex,
    pub terms: usize,
    /// Bound on |Σ_{n > terms}| assuming |a_n| ≤ C n^σ with C read off the supplied terms.
    pub tail_bound: f64,
}

/// Σ_{n=1}^{terms} a_n n^{−s}; `growth` is σ with a_n = O(n^{σ+ε}), and s must exceed σ + 1.
pub fn dirichlet_partial_sum(
    coeffs: &[Cyclo],
    s: &BigRational,
    growth: &BigRational,
    terms: usize,
    ctx: &mut NumCtx,
) -> Result<PartialSum> {
    let excess = s - growth - int(1);
    if !excess.is_positive() {
        return Err(Error::Domain(format!(
            "s = {s} is outside the half-plane of absolute convergence (σ > {})",
            growth + int(1)
        )));
    }
    if coeffs.len() <= terms {
        return Err(Error::Domain(format!("{terms} terms requested, {} coefficients supplied", coeffs.len().saturating_sub(1))));
    }
    let mut acc = BigComplex::zero(ctx.bits() + 64);
    let mut cmax = 0f64;
    let sigma = crate::exactalg::rational::to_f64(growth);
    let neg_s = -s.clone();
    for (n, a) in coeffs.iter().enumerate().take(terms + 1).skip(1) {
        if a.is_zero() {
            continue;
        }
        let (re, im) = a.to_c64();
        cmax = cmax.max((re * re + im * im).sqrt() / (n as f64).powf(sigma));
        let z = match a.as_rational() {
            Some(r) => {
                let rv = ctx.rational(&r);
                let zero = ctx.rational(&BigRational::zero());
                ctx.complex(rv, zero)
            }
            None => ctx.cyclotomic(a),
        };
        let w = ctx.int_pow(n as u64, &neg_s);
        acc = acc.add(&z.scale(&w, ctx), ctx);
    }
    let e = crate::exactalg::rational::to_f64(&excess);
    let tail_bound = cmax * (terms as f64).powf(-e) / e;
    Ok(PartialSum {
        value: acc,
        terms,
        tail_bound,
    })
}

/// Σ_{N𝔞 ≤ terms} ψ(𝔞) N𝔞^{−s}, summed ideal by ideal.
pub fn hecke_l_partial_sum(psi: &RingClassCharacter, k: i64, s: &BigRational, terms: usize, ctx: &mut NumCtx) -> Result<BigComplex> {
    let o = psi.order_ctx();
    let mut acc = BigComplex::zero(ctx.bits() + 64);
    let neg_s = -s.clone();
    let mut cache: BTreeMap<u64, BigComplex> = BTreeMap::new();
    for n in 1..=terms as u64 {
        let ideals = o.ideals_of_norm(n)?;
        if ideals.is_empty() {
            continue;
        }
        let w = ctx.int_pow(n, &neg_s);
        let nk = ctx.rational(&pow(&int(n as i64), k));
        let w = ctx.mul(&w, &nk);
        for a in ideals {
            let e = psi.ideal_exponent(&a)?;
            let m = psi.char_order();
            let z = match cache.get(&e) {
                Some(z) => z.clone(),
                None => {
                    let z = ctx.expi_fraction(&BigInt::from(e), &BigInt::from(m));
                    cache.insert(e, z.clone());
                    z
                }
            };
            acc = acc.add(&z.scale(&w, ctx), ctx);
        }
    }
    Ok(acc)
}

/// Checks Σ_n b_n X^n · ∏(1 − ρσX) = 1 − (α_gβ_gα_fβ_f) X² for the stream
/// b_{q^n} = a_{q^n}(g) a_{q^n}(f), to `n_max` terms.
pub fn rankin_product_identity(g_pp: &[Cyclo], f_pp: &[Cyclo], g: &HeckeRoots, f: &HeckeRoots) -> bool {
    let lf = rankin_local_factor(g, f);
    let n = g_pp.len().min(f_pp.len());
    let b: Vec<Cyclo> = (0..n).map(|i| &g_pp[i] * &f_pp[i]).collect();
    let mut prod = vec![Cyclo::zero(); n];
    for (i, bi) in b.iter().enumerate() {
        for (j, c) in lf.coeffs.iter().enumerate() {
            if i + j < n {
                prod[i + j] = &prod[i + j] + &(bi * c);
            }
        }
    }
    let cross = &g.product() * &f.product();
    prod.iter().enumerate().all(|(i, v)| match i {
        0 => v.is_one(),
        2 => *v == (-&cross),
        _ => v.is_zero(),
    })
}

