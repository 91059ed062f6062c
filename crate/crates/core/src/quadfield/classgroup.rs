//! Class groups of imaginary quadratic orders as groups of reduced forms.

use std::collections::HashMap;

use super::form::{reduced_forms, QuadForm};
use super::snf::smith;
use crate::error::{Error, Result};

/// Largest |disc| accepted by [`ClassGroup::new`] unless a bound is given.
pub const DEFAULT_DISC_BOUND: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct ClassGroup {
    disc: i64,
    forms: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
    /// Generators with orders d_1 | d_2 | ..., all d_i > 1.
    gens: Vec<QuadForm>,
    orders: Vec<u64>,
    /// Exponents of every element on `gens`, indexed like `forms`.
    logs: Vec<Vec<u64>>,
}

impl ClassGroup {
    pub fn new(disc: i64) -> Result<Self> {
        Self::with_bound(disc, DEFAULT_DISC_BOUND)
    }

    pub fn with_bound(disc: i64, bound: u64) -> Result<Self> {
        if disc >= 0 || disc.rem_euclid(4) > 1 {
            return Err(Error::Domain(format!(
                "{disc} is not a negative discriminant (need disc < 0, disc ≡ 0, 1 mod 4)"
            )));
        }
        if disc.unsigned_abs() > bound {
            return Err(Error::Resource(format!(
                "|disc| = {} exceeds the class group bound {bound}",
                disc.unsigned_abs()
            )));
        }
        let forms = reduced_forms(disc);
        let index: HashMap<QuadForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let h = forms.len();

        // Greedy generators: each new one extends the subgroup found so far,
        // and its relative order gives one triangular relation.
        let id = QuadForm::identity(disc);
        let mut sub: HashMap<QuadForm, Vec<i128>> = HashMap::from([(id, vec![])]);
        let mut greedy: Vec<QuadForm> = Vec::new();
        let mut relations: Vec<Vec<i128>> = Vec::new();
        for f in &forms {
            if sub.len() == h {
                break;
            }
            if sub.contains_key(f) {
                continue;
            }
            let k = greedy.len();
            let mut n = 1i128;
            let mut pw = *f;
            while !sub.contains_key(&pw) {
                pw = pw.compose(f);
                n += 1;
            }
            let mut rel: Vec<i128> = sub[&pw].iter().map(|x| -x).collect();
            rel.resize(k, 0);
            rel.push(n);
            relations.push(rel);
            let old: Vec<(QuadForm, Vec<i128>)> = sub.iter().map(|(a, b)| (*a, b.clone())).collect();
            let mut fj = id;
            for j in 1..n {
                fj = fj.compose(f);
                for (g, e) in &old {
                    let mut e = e.clone();
                    e.resize(k, 0);
                    e.push(j);
                    sub.insert(g.compose(&fj), e);
                }
            }
            for e in sub.values_mut() {
                e.resize(k + 1, 0);
            }
            greedy.push(*f);
        }
        let r = greedy.len();
        for rel in relations.iter_mut() {
            rel.resize(r, 0);
        }
        let s = smith(relations, r);
        let keep: Vec<usize> = (0..r).filter(|&j| s.diag[j] > 1).collect();
        let gens: Vec<QuadForm> = keep
            .iter()
            .map(|&j| {
                let mut acc = id;
                for (g, &e) in greedy.iter().zip(&s.v_inv[j]) {
                    let pw = if e >= 0 { g.pow(e as u64) } else { g.inverse().pow((-e) as u64) };
                    acc = acc.compose(&pw);
                }
                acc
            })
            .collect();
        let orders: Vec<u64> = keep.iter().map(|&j| s.diag[j] as u64).collect();
        let logs: Vec<Vec<u64>> = forms
            .iter()
            .map(|f| {
                let e = &sub[f];
                keep.iter()
                    .zip(&orders)
                    .map(|(&j, &d)| {
                        let t: i128 = e.iter().zip(&s.v).map(|(x, row)| x * row[j]).sum();
                        t.rem_euclid(d as i128) as u64
                    })
                    .collect()
            })
            .collect();
        Ok(ClassGroup {
            disc,
            forms,
            index,
            gens,
            orders,
            logs,
        })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn class_number(&self) -> u64 {
        self.forms.len() as u64
    }

    pub fn elements(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn generators(&self) -> &[QuadForm] {
        &self.gens
    }

    /// Invariant factors d_1 | d_2 | ... (trivial factors omitted).
    pub fn invariants(&self) -> &[u64] {
        &self.orders
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.len() <= 1
    }

    /// [Cl : Cl²] = 2^{number of even invariant factors}.
    pub fn genus_number(&self) -> u64 {
        1 << self.orders.iter().filter(|d| *d % 2 == 0).count()
    }

    pub fn identity(&self) -> QuadForm {
        QuadForm::identity(self.disc)
    }

    /// Exponent vector of a form on the SNF generators.
    pub fn dlog(&self, f: &QuadForm) -> Result<&[u64]> {
        let r = f.reduce();
        self.index
            .get(&r)
            .map(|&i| self.logs[i].as_slice())
            .ok_or_else(|| Error::Domain(format!("{f} is not a primitive form of discriminant {}", self.disc)))
    }

    pub fn from_exponents(&self, e: &[u64]) -> QuadForm {
        let mut acc = self.identity();
        for ((g, &d), &x) in self.gens.iter().zip(&self.orders).zip(e) {
            acc = acc.compose(&g.pow(x % d));
        }
        acc
    }

    pub fn order_of(&self, f: &QuadForm) -> Result<u64> {
        let e = self.dlog(f)?;
        Ok(e.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| d / num_integer::gcd(x, d))
            .fold(1, num_integer::lcm))
    }
}
