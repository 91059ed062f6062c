//! Formal group of a Weierstrass curve at t = −x/y: the series w(t), the
//! invariant differential, log_F, exp_F, and point recovery from a logarithm.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::PadicNumber;
use crate::elliptic::{CurvePoint, WeierstrassModel};
use crate::error::{Error, Result};

/// Formal-group data of E at p, with series known to t^T.
#[derive(Clone, Debug)]
pub struct FormalGroupContext {
    curve: WeierstrassModel,
    p: u64,
    digits: i64,
    t_prec: usize,
    m: u64,
    /// w(t) = t³ + … with −1/y = w, x = t/w.
    w: Vec<BigRational>,
    /// ω = Σ omega[n] tⁿ dt.
    omega: Vec<BigRational>,
    /// 1/ω(t).
    omega_inv: Vec<BigRational>,
    /// log_F(t) = Σ log[n] tⁿ.
    log: Vec<BigRational>,
    /// exp_F(z) = Σ exp[n] zⁿ.
    exp: Vec<BigRational>,
}

/// log_{E,p}(P) with a flag for points killed by |E(F_p)|.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalLog {
    pub value: PadicNumber,
    pub torsion: bool,
}

/// The two candidates ±P produced by the recovery formula.
#[derive(Clone, Debug)]
pub struct Recovery {
    /// X with X² = (log u / λ) · integral.
    pub log_value: PadicNumber,
    pub t_plus: Option<PadicNumber>,
    pub t_minus: Option<PadicNumber>,
    pub plus: CurvePoint<PadicNumber>,
    pub minus: CurvePoint<PadicNumber>,
}

fn mul_trunc(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// 1/a for a(0) ≠ 0.
fn inv_series(a: &[BigRational], len: usize) -> Vec<BigRational> {
    let a0inv = a[0].recip();
    let mut out = vec![BigRational::zero(); len];
    out[0] = a0inv.clone();
    for n in 1..len {
        let mut s = BigRational::zero();
        for k in 1..=n.min(a.len() - 1) {
            s += &a[k] * &out[n - k];
        }
        out[n] = -s * &a0inv;
    }
    out
}

fn shift(a: &[BigRational], k: usize, len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if i + k < len {
            out[i + k] = x.clone();
        }
    }
    out
}

fn axpy(acc: &mut [BigRational], c: &BigRational, x: &[BigRational]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        *a += c * b;
    }
}

impl FormalGroupContext {
    /// Series to t^{digits + 20}; p must be a prime of good reduction.
    pub fn new(curve: &WeierstrassModel, p: u64, digits: i64) -> Result<Self> {
        Self::with_t_precision(curve, p, digits, (digits + 20) as usize)
    }

    pub fn with_t_precision(curve: &WeierstrassModel, p: u64, digits: i64, t_prec: usize) -> Result<Self> {
        super::check_prime(p)?;
        if digits < 1 {
            return Err(Error::Domain(format!("precision {digits} < 1")));
        }
        let m = curve.count_points(p)?;
        let a: Vec<BigRational> = curve.a.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let (a1, a2, a3, a4, a6) = (&a[0], &a[1], &a[2], &a[3], &a[4]);
        let len = t_prec + 4;
        // w = t³ + a1 t w + a2 t² w + a3 w² + a4 t w² + a6 w³, by fixed point
        let t3 = shift(&[BigRational::one()], 3, len);
        let mut w = t3.clone();
        for _ in 0..len {
            let w2 = mul_trunc(&w, &w, len);
            let w3 = mul_trunc(&w2, &w, len);
            let mut next = t3.clone();
            axpy(&mut next, a1, &shift(&w, 1, len));
            axpy(&mut next, a2, &shift(&w, 2, len));
            axpy(&mut next, a3, &w2);
            axpy(&mut next, a4, &shift(&w2, 1, len));
            axpy(&mut next, a6, &w3);
            if next == w {
                break;
            }
            w = next;
        }
        // W = w/t³, V = 1/W, ω = (−2V + tV')/(−2V + a1 tV + a3 t³)
        let big_w: Vec<BigRational> = w[3..].to_vec();
        let n = t_prec + 1;
        let v = inv_series(&big_w, n);
        let mut num = vec![BigRational::zero(); n];
        let mut den = vec![BigRational::zero(); n];
        let two = BigRational::from_integer(2.into());
        for i in 0..n {
            num[i] = -&two * &v[i] + BigRational::from_integer(i.into()) * &v[i];
            den[i] = -&two * &v[i];
            if i >= 1 {
                den[i] += a1 * &v[i - 1];
            }
        }
        if n > 3 {
            den[3] += a3;
        }
        let omega = mul_trunc(&num, &inv_series(&den, n), n);
        let omega_inv = inv_series(&omega, n);
        let mut log = vec![BigRational::zero(); n + 1];
        for (i, c) in omega.iter().enumerate() {
            log[i + 1] = c / BigRational::from_integer((i + 1).into());
        }
        log.truncate(n);
        let exp = Self::revert(&omega_inv, n);
        Ok(FormalGroupContext {
            curve: curve.clone(),
            p,
            digits,
            t_prec,
            m,
            w,
            omega,
            omega_inv,
            log,
            exp,
        })
    }

    /// E with E' = g(E), E(0) = 0: the compositional inverse of ∫ 1/g.
    fn revert(g: &[BigRational], n: usize) -> Vec<BigRational> {
        let mut e = vec![BigRational::zero(); n];
        // pw[k][j] = [z^j] E^k
        let mut pw: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
        pw[0][0] = BigRational::one();
        for j in 0..n - 1 {
            // [z^j] g(E) needs E^k to degree j, known from e_1..e_j
            if j >= 1 {
                for k in 1..=j {
                    let mut s = BigRational::zero();
                    for i in 1..=(j + 1 - k) {
                        if !e[i].is_zero() && !pw[k - 1][j - i].is_zero() {
                            s += &e[i] * &pw[k - 1][j - i];
                        }
                    }
                    pw[k][j] = s;
                }
            }
            let mut c = BigRational::zero();
            for k in 0..=j {
                if k < g.len() && !g[k].is_zero() {
                    c += &g[k] * &pw[k][j];
                }
            }
            e[j + 1] = c / BigRational::from_integer((j + 1).into());
        }
        e
    }

    pub fn curve(&self) -> &WeierstrassModel {
        &self.curve
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn digits(&self) -> i64 {
        self.digits
    }

    pub fn t_precision(&self) -> usize {
        self.t_prec
    }

    /// m = |E(F_p)|.
    pub fn group_order(&self) -> u64 {
        self.m
    }

    pub fn w_series(&self) -> &[BigRational] {
        &self.w
    }

    pub fn omega_series(&self) -> &[BigRational] {
        &self.omega
    }

    pub fn log_series(&self) -> &[BigRational] {
        &self.log
    }

    pub fn exp_series(&self) -> &[BigRational] {
        &self.exp
    }

    fn eval(&self, coeffs: &[BigRational], t: &PadicNumber, prec: i64) -> Result<PadicNumber> {
        let p = self.p;
        let vt = t.valuation();
        let t = t.with_precision(prec);
        let mut acc = PadicNumber::zero(p, prec);
        let mut power = PadicNumber::one(p, prec + 2 * vt.abs() + 2);
        for (n, c) in coeffs.iter().enumerate() {
            if n > 0 {
                power = power.mul(&t);
            }
            if c.is_zero() {
                continue;
            }
            let vc = crate::exactalg::rational::valuation(c, p);
            let cc = PadicNumber::from_rational(c, p, prec - n as i64 * vt + vc.abs() + 4)?;
            acc = acc.add(&cc.mul(&power));
        }
        Ok(acc)
    }

    /// Checks that the terms beyond t^T of a series with |c_n| ≤ p^{slack(n)} are below p^prec.
    fn tail_ok(&self, vt: i64, prec: i64, slack: impl Fn(i64) -> i64) -> bool {
        let n0 = self.t_prec as i64 + 1;
        (n0..n0 + 200).all(|n| n * vt - slack(n) >= prec)
    }

    fn logp_floor(&self, n: i64) -> i64 {
        let (mut e, mut q) = (0i64, self.p as i64);
        while q <= n {
            e += 1;
            q = q.saturating_mul(self.p as i64);
        }
        e
    }

    /// log_F(t) for v(t) ≥ 1, to the absolute precision of t.
    pub fn log_f(&self, t: &PadicNumber) -> Result<PadicNumber> {
        if t.is_zero() {
            return Ok(PadicNumber::zero(self.p, t.precision()));
        }
        let vt = t.valuation();
        if vt < 1 {
            return Err(Error::Domain(format!("formal parameter has valuation {vt} < 1")));
        }
        let prec = t.precision();
        if !self.tail_ok(vt, prec, |n| self.logp_floor(n)) {
            return Err(Error::Precision(format!(
                "log_F truncated at t^{} cannot reach O(p^{prec})",
                self.t_prec
            )));
        }
        Ok(self.eval(&self.log, t, prec)?.with_precision(prec))
    }

    /// 1/ω(t) for v(t) ≥ 1.
    fn omega_inv_at(&self, t: &PadicNumber) -> Result<PadicNumber> {
        let prec = t.precision();
        Ok(self.eval(&self.omega_inv, t, prec)?.with_precision(prec))
    }

    /// exp_F(X) for v(X) ≥ 1, by Newton iteration on log_F(t) = X.
    pub fn exp_f(&self, x: &PadicNumber) -> Result<PadicNumber> {
        let prec = x.precision();
        if x.is_zero() {
            return Ok(PadicNumber::zero(self.p, prec));
        }
        if x.valuation() < 1 {
            return Err(Error::Precision(format!(
                "exp_F needs v(X) ≥ 1, got {}",
                x.valuation()
            )));
        }
        let mut t = x.clone();
        let mut steps = 0;
        loop {
            let r = self.log_f(&t)?.sub(x);
            if r.is_zero() {
                return Ok(t.with_precision(prec));
            }
            t = t.sub(&r.mul(&self.omega_inv_at(&t)?)).with_precision(prec);
            steps += 1;
            if steps > 64 {
                return Err(Error::Precision("exp_F Newton iteration did not converge".into()));
            }
        }
    }

    /// exp_F(X) from the reverted series; used to cross-check the Newton route.
    pub fn exp_f_series(&self, x: &PadicNumber) -> Result<PadicNumber> {
        let prec = x.precision();
        let vx = x.valuation();
        if x.is_zero() {
            return Ok(PadicNumber::zero(self.p, prec));
        }
        let pm = self.p as i64 - 1;
        if vx < 1 || !self.tail_ok(vx, prec, |n| (n - 1) / pm) {
            return Err(Error::Precision(format!(
                "exp_F series truncated at z^{} cannot reach O(p^{prec}) with v(X) = {vx}",
                self.t_prec
            )));
        }
        Ok(self.eval(&self.exp, x, prec)?.with_precision(prec))
    }

    /// (x, y) = (t/w(t), −1/w(t)) for a formal parameter t ≠ 0.
    pub fn point_from_t(&self, t: &PadicNumber) -> Result<CurvePoint<PadicNumber>> {
        if t.is_zero() {
            return Ok(CurvePoint::Infinity);
        }
        if t.valuation() < 1 {
            return Err(Error::Domain("formal parameter must have positive valuation".into()));
        }
        let prec = t.precision();
        let w = self.eval(&self.w, t, prec + 3 * t.valuation())?;
        let winv = w.inverse()?;
        Ok(CurvePoint::Affine {
            x: t.mul(&winv),
            y: winv.neg(),
        })
    }

    /// t = −x/y.
    pub fn t_of_point(p: &CurvePoint<PadicNumber>) -> Result<Option<PadicNumber>> {
        match p {
            CurvePoint::Infinity => Ok(None),
            CurvePoint::Affine { x, y } => Ok(Some(x.div(y)?.neg())),
        }
    }

    /// log_{E,p}(P) = log_F(t(mP))/m for a rational point.
    pub fn formal_log(&self, pt: &CurvePoint<BigRational>) -> Result<FormalLog> {
        let p = self.p;
        let mp = self.curve.mul(pt, self.m as i64)?;
        let (x, y) = match &mp {
            CurvePoint::Infinity => {
                return Ok(FormalLog {
                    value: PadicNumber::zero(p, self.digits),
                    torsion: !pt.is_infinity(),
                })
            }
            CurvePoint::Affine { x, y } => (x, y),
        };
        let t = -(x / y);
        let vm = crate::exactalg::arith::valuation(self.m as i128, p) as i64;
        let tp = PadicNumber::from_rational(&t, p, self.digits + vm)?;
        if tp.valuation() < 1 {
            return Err(Error::Domain(format!("|E(F_{p})|·P does not reduce to O")));
        }
        let l = self.log_f(&tp)?;
        let mi = PadicNumber::from_int(p, self.m as i64, self.digits + 2 * vm + 2);
        Ok(FormalLog {
            value: l.div(&mi)?.with_precision(self.digits),
            torsion: false,
        })
    }

    /// log_{E,p}(P) for a point over Q_p.
    pub fn formal_log_padic(&self, pt: &CurvePoint<PadicNumber>) -> Result<FormalLog> {
        let p = self.p;
        if !self.curve.on_curve(pt) {
            return Err(Error::Domain(format!("{pt:?} is not on the curve to its precision")));
        }
        let mp = self.curve.mul_unchecked(pt, self.m as i64);
        let Some(t) = Self::t_of_point(&mp)? else {
            return Ok(FormalLog {
                value: PadicNumber::zero(p, self.digits),
                torsion: !pt.is_infinity(),
            });
        };
        if t.is_zero() {
            return Ok(FormalLog {
                value: PadicNumber::zero(p, t.precision()),
                torsion: true,
            });
        }
        let l = self.log_f(&t)?;
        let vm = crate::exactalg::arith::valuation(self.m as i128, p) as i64;
        let mi = PadicNumber::from_int(p, self.m as i64, l.precision() + 2 * vm + 2);
        Ok(FormalLog {
            value: l.div(&mi)?,
            torsion: false,
        })
    }

    /// ±exp_F(X) with X² = (log u / λ) · integral.
    pub fn recover_point(&self, integral: &PadicNumber, log_u: &PadicNumber, lambda: &PadicNumber) -> Result<Recovery> {
        let p = self.p;
        if lambda.is_zero() {
            return Err(Error::Domain("λ = 0".into()));
        }
        if log_u.is_zero() {
            return Err(Error::Domain("log_p(u) = 0".into()));
        }
        let q = log_u.div(lambda)?.mul(integral);
        if q.is_zero() {
            let z = PadicNumber::zero(p, q.precision().div_euclid(2));
            return Ok(Recovery {
                log_value: z,
                t_plus: None,
                t_minus: None,
                plus: CurvePoint::Infinity,
                minus: CurvePoint::Infinity,
            });
        }
        let (x, _) = q.sqrt()?;
        if x.valuation() < 1 {
            return Err(Error::Precision(format!(
                "recovered logarithm has valuation {} < 1; exp_F does not converge",
                x.valuation()
            )));
        }
        let tp = self.exp_f(&x)?;
        let tm = self.exp_f(&x.neg())?;
        Ok(Recovery {
            plus: self.point_from_t(&tp)?,
            minus: self.point_from_t(&tm)?,
            t_plus: Some(tp),
            t_minus: Some(tm),
            log_value: x,
        })
    }

    /// The m-multiple of a rational point, which lies in the formal group.
    pub fn formal_multiple(&self, pt: &CurvePoint<BigRational>) -> Result<CurvePoint<BigRational>> {
        self.curve.mul(pt, self.m as i64)
    }
}

/// Whether two Q_p points agree to precision n.
pub fn points_agree(a: &CurvePoint<PadicNumber>, b: &CurvePoint<PadicNumber>, n: i64) -> bool {
    match (a, b) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => true,
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
            x1.sub(x2).with_precision(n).is_zero() && y1.sub(y2).with_precision(n).is_zero()
        }
        _ => false,
    }
}
