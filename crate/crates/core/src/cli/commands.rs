//! The individual commands. Each one appends checks and sections to a report.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use super::report::{Mode, Outcome, Report};
use super::scenario::{parse_padic_literal, Scenario};
use crate::elliptic::CurvePoint;
use crate::error::{Error, Result};
use crate::exactalg::arith::{is_prime, prime_divisors};
use crate::exactalg::rational::{int, rat};
use crate::exactalg::{CyclotomicElement as Cyclo, DirichletCharacter};
use crate::factors::{
    lambda_prime_level, prime_level_identity, f_infty_theorem_value, lambda_general_with_pet, lambda_padic, lambda_route_identity,
    lambda_theorem, lambda_zero, predicted_integral, ramified_heegner_sign, verify_assembly, verify_euler_identity,
};
use crate::padic::{elliptic_unit_log, FormalGroupContext, PadicNumber};
use crate::qexp::eisenstein_series;
use crate::quadfield::ClassGroup;
use crate::theta::{theta_series, verify_eigenform};

/// Largest Hecke prime exercised by the eigenform suites.
pub const HECKE_PRIME_BOUND: u64 = 20;

/// Numeric samples per l in the Euler identity check.
pub const EULER_NUMERIC_SAMPLES: usize = 20;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub l_min: i64,
    pub l_max: i64,
    /// Test hook: multiplies 𝔣_Pet in the assembly check.
    pub pet_scale: BigRational,
    pub disc: Option<u64>,
    pub order_conductor: Option<u64>,
    pub weight: Option<u32>,
    pub level: Option<u64>,
    pub truncation: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            l_min: 0,
            l_max: 5,
            pet_scale: BigRational::one(),
            disc: None,
            order_conductor: None,
            weight: None,
            level: None,
            truncation: None,
        }
    }
}

fn l_tag(l: i64) -> String {
    if l < 0 {
        format!("l{l}")
    } else {
        format!("l{l:02}")
    }
}

fn hecke_primes(level: u64) -> Vec<u64> {
    (2..=HECKE_PRIME_BOUND).filter(|&l| is_prime(l) && level % l != 0).collect()
}

/// Reduced primitive forms of discriminant `disc`, by direct search.
fn count_reduced_forms(disc: i64) -> u64 {
    let n = -disc;
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

pub fn classgroup(r: &mut Report, sc: Option<&Scenario>, o: &Options) -> Result<()> {
    let (d, c) = match (o.disc, sc) {
        (Some(d), _) => (d, o.order_conductor.unwrap_or(1)),
        (None, Some(s)) => (s.file.d_k, o.order_conductor.unwrap_or(s.file.c)),
        (None, None) => return Err(Error::Validation("classgroup needs --disc or --scenario".into())),
    };
    let disc = -((d * c * c) as i64);
    let g = ClassGroup::new(disc).map_err(|e| match e {
        Error::Domain(m) => Error::Validation(m),
        other => other,
    })?;
    let h = g.class_number();
    r.section(
        "classgroup",
        json!({
            "D": d,
            "c": c,
            "disc": disc,
            "class_number": h,
            "invariants": g.invariants(),
            "genus_number": g.genus_number(),
            "generators": g.generators().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "forms": g.elements().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        }),
    );
    r.check(
        "classgroup.form_count",
        "class number equals the number of reduced primitive forms",
        Mode::Exact,
        || Ok(Outcome::equal(h, count_reduced_forms(disc))),
    )?;
    r.check(
        "classgroup.invariant_product",
        "order of the group equals the product of its invariant factors",
        Mode::Exact,
        || Ok(Outcome::equal(g.invariants().iter().product::<u64>(), h)),
    )?;
    if c == 1 {
        r.check(
            "classgroup.genus_number",
            "genus number g_K = 2^{#q | D_K − 1}",
            Mode::Exact,
            || Ok(Outcome::equal(g.genus_number(), 1u64 << (prime_divisors(d).len() - 1))),
        )?;
    } else {
        r.skip("classgroup.genus_number", "genus number g_K = 2^{#q | D_K − 1}", "non-maximal order");
    }
    Ok(())
}

fn coeff_strings(c: &[Cyclo], q: usize) -> Vec<String> {
    c.iter().take(q + 1).map(|x| x.to_string()).collect()
}

pub fn theta(r: &mut Report, s: &Scenario, o: &Options) -> Result<()> {
    let q = o.truncation.unwrap_or(s.file.precision.q_truncation);
    let psi = &s.factors.psi;
    let primes = hecke_primes(s.factors.level.dk * s.factors.level.c * s.factors.level.c);
    let reach = q * primes.last().copied().unwrap_or(1) as usize;
    let th = theta_series(psi, reach)?;
    let coeffs = th.series.coeffs();
    r.section(
        "theta",
        json!({
            "level": th.level,
            "weight": th.weight,
            "nebentype_conductor": th.nebentype.conductor(),
            "cuspidal": th.cuspidal,
            "a_0": coeffs[0].to_string(),
            "coefficients": coeff_strings(coeffs, q),
        }),
    );
    let field = psi.field();
    let trivial_maximal = psi.is_trivial() && s.file.c == 1;
    if trivial_maximal {
        let hw = rat(s.factors.h_k as i64, field.w() as i64);
        r.check("theta.constant_term", "a_0(θ_1) = h_K/w_K", Mode::Exact, || {
            Ok(Outcome::equal(&coeffs[0], Cyclo::from_rational(hw)))
        })?;
        let chi = DirichletCharacter::kronecker(field.disc())?;
        r.check(
            "theta.ideal_count",
            "a_n(θ_1) = #{ideals of norm n} = Σ_{d | n} χ_K(d)",
            Mode::Exact,
            || {
                let bad = (1..=q as u64).find(|&n| {
                    let count: i64 = (1..=n).filter(|d| n % d == 0).map(|d| chi.value_int(d as i64)).sum();
                    coeffs[n as usize] != Cyclo::from_int(count)
                });
                Ok(Outcome::new(bad.is_none(), json!({ "first_mismatch": bad }), json!({ "n_max": q })))
            },
        )?;
    } else {
        r.skip("theta.constant_term", "a_0(θ_1) = h_K/w_K", "ψ ≠ 1 or c > 1");
        r.skip("theta.ideal_count", "a_n(θ_1) = Σ_{d | n} χ_K(d)", "ψ ≠ 1 or c > 1");
    }
    for chk in verify_eigenform(&th, &primes, q)? {
        r.check(
            &format!("theta.hecke_eigen.l{:02}", chk.prime),
            "T_ℓ θ_ψ = a_ℓ(θ_ψ) θ_ψ",
            Mode::Exact,
            || Ok(Outcome::new(chk.pass, chk.detail.clone(), json!({ "truncation": q }))),
        )?;
    }
    Ok(())
}

pub fn eisenstein(r: &mut Report, sc: Option<&Scenario>, o: &Options) -> Result<()> {
    let d = match (o.disc, sc) {
        (Some(d), _) => d,
        (None, Some(s)) => s.file.d_k,
        (None, None) => return Err(Error::Validation("eisenstein needs --disc or --scenario".into())),
    };
    let k = o.weight.unwrap_or(1);
    let level = o.level.unwrap_or(d);
    let q = o
        .truncation
        .or(sc.map(|s| s.file.precision.q_truncation))
        .unwrap_or(200);
    let field = crate::quadfield::ImagQuadField::new(d).map_err(|e| Error::Validation(e.to_string()))?;
    let chi = DirichletCharacter::kronecker(field.disc())?;
    let primes = hecke_primes(level);
    let reach = q * primes.last().copied().unwrap_or(1) as usize;
    let e = eisenstein_series(k, &chi, level, reach).map_err(|e| match e {
        Error::Domain(m) => Error::Validation(m),
        other => other,
    })?;
    let coeffs = e.coeffs();
    r.section(
        "eisenstein",
        json!({
            "weight": k,
            "level": level,
            "character": format!("χ_{{-{d}}}"),
            "a_0": coeffs[0].to_string(),
            "coefficients": coeff_strings(coeffs, q),
        }),
    );
    for &l in &primes {
        let chi_l = chi.induce(level)?.value(l as i64);
        r.check(
            &format!("eisenstein.hecke_eigen.l{l:02}"),
            "T_ℓ E_{k,χ} = σ_{k−1,χ}(ℓ) E_{k,χ}",
            Mode::Exact,
            || {
                let pass = e.truncate(q * l as usize)?.is_hecke_eigen(l, k, &chi_l)?;
                Ok(Outcome::new(pass, format!("T_{l} E"), format!("a_{l}·E on n ≤ {q}")))
            },
        )?;
    }
    if k == 1 && level == d {
        let g = ClassGroup::new(field.disc())?;
        let hw = rat(g.class_number() as i64, field.w() as i64);
        r.check(
            "eisenstein.constant_term",
            "a_0(E_{1,χ_K}) = L(χ_K, 0)/2 = h_K/w_K",
            Mode::Exact,
            || Ok(Outcome::equal(&coeffs[0], Cyclo::from_rational(hw))),
        )?;
        let psi = crate::heckechar::RingClassCharacter::trivial(std::sync::Arc::new(field.order(1)?));
        r.check("eisenstein.equals_theta_one", "E_{1,χ_K} = θ_1", Mode::Exact, || {
            let th = theta_series(&psi, q)?;
            let bad = (0..=q).find(|&n| th.series.coeffs()[n] != coeffs[n]);
            Ok(Outcome::new(bad.is_none(), json!({ "first_mismatch": bad }), json!({ "n_max": q })))
        })?;
    } else {
        r.skip("eisenstein.constant_term", "a_0(E_{1,χ_K}) = h_K/w_K", "needs k = 1 and level D_K");
        r.skip("eisenstein.equals_theta_one", "E_{1,χ_K} = θ_1", "needs k = 1 and level D_K");
    }
    Ok(())
}

pub fn verify_factors(r: &mut Report, s: &Scenario, o: &Options) -> Result<()> {
    if o.l_min < -1 || o.l_max < o.l_min || o.l_max > 99 {
        return Err(Error::Validation(format!("l range [{}, {}] outside −1..=99", o.l_min, o.l_max)));
    }
    let f = &s.factors;
    for l in o.l_min..=o.l_max {
        let tag = l_tag(l);
        r.check(
            &format!("factors.euler_identity.{tag}"),
            "𝔢_HR(l)·𝔢_K(Φ_l) = 𝔢_BDP(Ψ_l) as rational functions in A = ψ_{2l+2}(℘) and α_f",
            Mode::Exact,
            || {
                let chk = verify_euler_identity(l, f.p, EULER_NUMERIC_SAMPLES, o.seed.wrapping_add((l + 1) as u64))?;
                Ok(Outcome::new(chk.holds(), chk.to_json(), "𝔢_BDP(Ψ_l)"))
            },
        )?;
        r.check(
            &format!("factors.assembly.{tag}"),
            "𝔣_HR·𝔣_K/(𝔣_BDP·𝔣_Pet) equals the closed form of 𝔣_∞(l), π-degree 0",
            Mode::Exact,
            || {
                let chk = verify_assembly(&f.level, l, &o.pet_scale)?;
                Ok(Outcome::new(chk.holds, chk.assembled.to_json(), chk.closed.to_json()))
            },
        )?;
    }
    let f_inf = f.f_infty_minus_one()?;
    r.section(
        "special_values",
        json!({
            "f_infty_minus_one": f_inf.to_string(),
            "h_K": f.h_k,
            "g_K": f.g_k,
            "h_c": f.level.h_c,
            "N": f.level.n,
            "psi_heegner": f.psi_heegner.to_string(),
            "heegner_sign": ramified_heegner_sign(f),
        }),
    );
    let anchor = "𝔣_∞(−1) = −1/(2 h_K g_K) when N = D_K = N_E and c = 1";
    if f.theorem_applies() {
        r.check("factors.f_infty_weight_one", anchor, Mode::Exact, || {
            Ok(Outcome::equal(&f_inf, Cyclo::from_rational(f_infty_theorem_value(f.h_k, f.g_k))))
        })?;
    } else {
        r.skip("factors.f_infty_weight_one", anchor, "D_K ≠ N_E or c ≠ 1");
    }
    Ok(())
}

/// λ as computed by the general assembly.
pub fn lambda(r: &mut Report, s: &Scenario, o: &Options) -> Result<Cyclo> {
    let f = &s.factors;
    let g = lambda_general_with_pet(f, None)?;
    let digits = s.digits();
    let mut sec = g.to_json();
    sec["lambda_zero"] = json!(lambda_zero(f)?.to_string());
    match lambda_padic(&g.value, f.p, digits) {
        Ok(v) => sec["padic"] = json!(v.render()),
        Err(Error::Unsupported(m)) => {
            sec["padic"] = Value::Null;
            sec["padic_unavailable"] = json!(m);
        }
        Err(e) => return Err(e),
    }
    if g.pet_reconstructed {
        sec["note"] = json!("ℰul^Pet(−1) reconstructed as a product of local ratios (N > D_K c²)");
    }
    r.section("lambda", sec);
    r.check("lambda.general_nonzero", "λ ≠ 0", Mode::Exact, || {
        Ok(Outcome::new(!g.value.is_zero(), g.value.to_string(), "≠ 0"))
    })?;
    let anchor_thm = "λ = (p − a_p ψ(℘̄) + ψ²(℘̄))²/p · λ₀/(h_K g_K)";
    let theorem = if f.theorem_applies() {
        let t = lambda_theorem(f)?;
        r.check("lambda.theorem_equals_general", anchor_thm, Mode::Exact, || {
            Ok(Outcome::equal(&g.value, &t))
        })?;
        Some(t)
    } else {
        r.skip("lambda.theorem_equals_general", anchor_thm, "D_K ≠ N_E or c ≠ 1");
        None
    };
    let anchor_x = "λ = |E(F_p)|²/(p(p − 1)h_K) for N_E = D_K prime and ψ = 1";
    match (&theorem, f.prime_level_applies()) {
        (Some(t), true) => {
            let x = lambda_prime_level(f)?;
            r.check("lambda.prime_level_equals_theorem", anchor_x, Mode::Exact, || {
                Ok(Outcome::equal(t, Cyclo::from_rational(x.clone())))
            })?;
        }
        _ => r.skip("lambda.prime_level_equals_theorem", anchor_x, "needs N_E = D_K prime, c = 1 and ψ = 1"),
    }
    r.check(
        "lambda.prime_level_identity",
        "theorem formula at ψ = 1 ≡ prime-level formula in (p, a_p, h_K)",
        Mode::Exact,
        || {
            let out = prime_level_identity(o.seed)?;
            Ok(Outcome::new(out.holds, json!({ "samples": out.samples }), "identity"))
        },
    )?;
    for (name, cuspidal) in [("eisenstein", false), ("cuspidal", true)] {
        r.check(
            &format!("lambda.route_identity.{name}"),
            "general assembly with ℰul_N = 1, 𝔣_∞ = −1/(2h_K g_K) ≡ theorem formula",
            Mode::Exact,
            || {
                let out = lambda_route_identity(cuspidal, o.seed)?;
                Ok(Outcome::new(out.holds, json!({ "samples": out.samples }), "identity"))
            },
        )?;
    }
    if f.psi.is_trivial() {
        r.check(
            "lambda.bdp_fudge_point_count",
            "𝔣_p(f, 1)·p² = |E(F_p)|²",
            Mode::Exact,
            || {
                let m = f.curve.count_points(f.p)? as i64;
                Ok(Outcome::equal(g.bdp_fudge.scale(&int((f.p * f.p) as i64)), Cyclo::from_int(m * m)))
            },
        )?;
    } else {
        r.skip("lambda.bdp_fudge_point_count", "𝔣_p(f, 1)·p² = |E(F_p)|²", "ψ ≠ 1");
    }
    Ok(g.value)
}

fn stage(name: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::NoSquareRoot(m) => Error::NoSquareRoot(format!("stage {name}: {m}")),
        Error::Precision(m) => Error::Precision(format!("stage {name}: {m}")),
        Error::Domain(m) => Error::Domain(format!("stage {name}: {m}")),
        other => other,
    }
}

fn render_point(p: &CurvePoint<PadicNumber>) -> Value {
    match p {
        CurvePoint::Infinity => json!("O"),
        CurvePoint::Affine { x, y } => json!({ "x": x.render(), "y": y.render() }),
    }
}

/// Equal to the smaller of the two precisions.
fn padic_close(a: &PadicNumber, b: &PadicNumber) -> bool {
    a.sub(b).is_zero()
}

pub fn recover(r: &mut Report, s: &Scenario, _o: &Options) -> Result<()> {
    let f = &s.factors;
    let p = f.p;
    let digits = s.digits();
    let inputs = s.file.inputs.clone().unwrap_or_default();
    let g = lambda_general_with_pet(f, None).map_err(stage("lambda"))?;
    let lam = lambda_padic(&g.value, p, digits).map_err(stage("lambda"))?;
    let ctx = FormalGroupContext::new(&f.curve, p, digits).map_err(stage("formal group"))?;
    let (log_u, unit_source) = match &inputs.unit_log {
        Some(lit) => (parse_padic_literal(lit, p, digits)?, "input".to_string()),
        None if f.psi.is_trivial() && s.file.c == 1 && f.h_k == 1 => {
            let u = elliptic_unit_log(&s.order, p, digits).map_err(stage("elliptic unit"))?;
            (u.log, format!("auto: u = {}", u.generator))
        }
        None => {
            return Err(Error::Validation(
                "recover needs inputs.unit_log unless h_K = 1, c = 1 and ψ = 1".into(),
            ))
        }
    };
    let (integral, synthetic) = match (&inputs.iterated_integral, &s.point) {
        (Some(lit), _) => (parse_padic_literal(lit, p, digits)?, false),
        (None, Some(pt)) => (
            predicted_integral(&ctx, pt, &lam, &log_u).map_err(stage("prediction"))?.value,
            true,
        ),
        (None, None) => {
            return Err(Error::Validation("recover needs inputs.iterated_integral or inputs.heegner_point".into()))
        }
    };
    let rec = ctx.recover_point(&integral, &log_u, &lam).map_err(stage("recovery"))?;
    let mut sec = json!({
        "lambda": g.value.to_string(),
        "unit_log": log_u.render(),
        "unit_source": unit_source,
        "iterated_integral": integral.render(),
        "synthetic_integral": synthetic,
        "log_value": rec.log_value.render(),
        "plus": render_point(&rec.plus),
        "minus": render_point(&rec.minus),
        "is_identity": rec.plus.is_infinity(),
    });
    if let Some(pt) = &s.point {
        let lp = ctx.formal_log(pt).map_err(stage("reference log"))?;
        sec["reference_log"] = json!(lp.value.render());
        sec["reference_torsion"] = json!(lp.torsion);
        let plus = padic_close(&rec.log_value, &lp.value);
        let minus = padic_close(&rec.log_value, &lp.value.neg());
        r.check(
            "recover.match",
            "recovered log_{E,p} equals ±log_{E,p}(P) for the reference point",
            Mode::Numeric,
            || Ok(Outcome::new(plus || minus, rec.log_value.render(), lp.value.render())),
        )?;
    } else {
        r.skip("recover.match", "recovered log_{E,p} equals ±log_{E,p}(P)", "no reference point");
    }
    r.section("recover", sec);
    Ok(())
}
