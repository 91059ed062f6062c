//! Multivariate polynomials and rational functions over Q.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::pow;

/// Sparse polynomial in a fixed number of variables; keys are exponent vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.insert_add(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                if *k > 0 {
                    t *= pow(x, *k as i64);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Rewrites every power var^k, k ≥ 2, using var² = t·var − n where t and n
    /// do not involve `var`. The result has degree ≤ 1 in `var`.
    pub fn reduce_quadratic(&self, var: usize, t: &MPoly, n: &MPoly) -> MPoly {
        assert_eq!(t.degree_in(var), 0);
        assert_eq!(n.degree_in(var), 0);
        // var^k = u_k·var + v_k with u_{k+1} = t·u_k + v_k, v_{k+1} = −n·u_k.
        let maxk = self.degree_in(var);
        let mut uv = vec![(MPoly::zero(self.nvars), MPoly::one(self.nvars))];
        for k in 1..=maxk as usize {
            let (u, v) = &uv[k - 1];
            let nu = t.mul(u).add(v);
            let nv = n.mul(u).neg();
            uv.push((nu, nv));
        }
        let x = MPoly::var(self.nvars, var);
        let mut acc = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut rest = e.clone();
            rest[var] = 0;
            let mono = MPoly {
                nvars: self.nvars,
                terms: BTreeMap::from([(rest, c.clone())]),
            };
            let (u, v) = &uv[k];
            acc = acc.add(&mono.mul(&u.mul(&x).add(v)));
        }
        acc
    }

    /// Coefficient of var^k as a polynomial in the remaining variables.
    pub fn coeff_in(&self, var: usize, k: u32) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = e.clone();
                e2[var] = 0;
                r.terms.insert(e2, c.clone());
            }
        }
        r
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k > 0)
                    .map(|(i, k)| if *k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Quotient of two polynomials; no gcd cancellation is attempted.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFunc {
    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars();
        RatFunc {
            num: p,
            den: MPoly::one(n),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, i))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            };
        }
        RatFunc {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    /// Division; panics when the divisor is the zero function.
    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.num.is_zero(), "division by the zero rational function");
        RatFunc {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        RatFunc {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RatFunc {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Value at a point, or None at a pole.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Maximum total degree of numerator and denominator.
    pub fn degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    #[test]
    fn quadratic_reduction() {
        // x^3 with x^2 = a x − 5 (a = variable 1)
        let x = MPoly::var(2, 0);
        let a = MPoly::var(2, 1);
        let five = MPoly::constant(2, int(5));
        let r = x.pow(3).reduce_quadratic(0, &a, &five);
        // x^3 = x(a x − 5) = a(a x − 5) − 5x = (a² − 5)x − 5a
        let expect = a.mul(&a).sub(&five).mul(&x).sub(&a.scale(&int(5)));
        assert_eq!(r, expect);
    }

    #[test]
    fn ratfunc_arith() {
        let x = RatFunc::var(1, 0);
        let one = RatFunc::int(1, 1);
        let f = x.mul(&x).sub(&one).div(&x.sub(&one));
        assert!(f.equals(&x.add(&one)));
        assert_eq!(f.eval(&[int(1)]), None);
        assert_eq!(f.eval(&[int(3)]), Some(int(4)));
    }
}
