//! Dirichlet characters with values in μ_m.

use std::collections::VecDeque;

use super::arith::{divisors, gcd_u, kronecker_symbol, lcm_u};
use super::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};

/// A Dirichlet character modulo N, stored as a table of exponents:
/// χ(a) = ζ_order^{table[a]} for units a, and 0 otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    table: Vec<Option<u64>>,
    even: bool,
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        let table = (0..modulus)
            .map(|a| (gcd_u(a, modulus) == 1).then_some(0))
            .collect();
        DirichletCharacter {
            modulus,
            order: 1,
            table,
            even: true,
        }
    }

    /// The quadratic character d ↦ (disc | d) modulo |disc|.
    ///
    /// For a fundamental discriminant this is the primitive character of
    /// conductor |disc| attached to Q(√disc).
    pub fn kronecker(disc: i64) -> Result<Self> {
        if disc == 0 || disc == 1 {
            return Ok(Self::trivial(1));
        }
        let n = disc.unsigned_abs();
        let mut table = Vec::with_capacity(n as usize);
        for a in 0..n {
            let k = kronecker_symbol(disc, a as i64).unwrap_or(0);
            table.push(match k {
                1 => Some(0),
                -1 => Some(1),
                _ => None,
            });
        }
        let even = disc > 0;
        Self::from_table_unchecked(n, 2, table, even)
    }

    /// Builds a character from its exponent table, checking multiplicativity.
    pub fn from_table(modulus: u64, order: u64, table: Vec<Option<u64>>) -> Result<Self> {
        if table.len() as u64 != modulus {
            return Err(Error::Validation("character table length must equal modulus".into()));
        }
        for a in 0..modulus {
            let unit = gcd_u(a, modulus) == 1;
            if unit != table[a as usize].is_some() {
                return Err(Error::Validation(format!(
                    "character must vanish exactly on non-units (residue {a})"
                )));
            }
        }
        let table: Vec<Option<u64>> = table.into_iter().map(|e| e.map(|k| k % order)).collect();
        let units: Vec<u64> = (0..modulus).filter(|&a| table[a as usize].is_some()).collect();
        for &a in &units {
            for &b in &units {
                let ab = (a * b % modulus) as usize;
                let lhs = table[ab].expect("unit");
                let rhs = (table[a as usize].expect("unit") + table[b as usize].expect("unit")) % order;
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "table is not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        let even = if modulus <= 2 {
            true
        } else {
            table[(modulus - 1) as usize] == Some(0)
        };
        Ok(DirichletCharacter {
            modulus,
            order,
            table,
            even,
        })
    }

    /// Builds a character from its values on generators of (Z/N)^×, given as
    /// (residue, exponent) pairs meaning χ(residue) = ζ_order^exponent.
    pub fn from_generators(modulus: u64, order: u64, gens: &[(u64, u64)]) -> Result<Self> {
        let mut table: Vec<Option<u64>> = vec![None; modulus as usize];
        let start = 1 % modulus;
        table[start as usize] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            let ea = table[a as usize].expect("visited");
            for &(g, e) in gens {
                let b = a * (g % modulus) % modulus;
                let eb = (ea + e) % order;
                match table[b as usize] {
                    None => {
                        table[b as usize] = Some(eb);
                        queue.push_back(b);
                    }
                    Some(prev) if prev != eb => {
                        return Err(Error::Validation(
                            "generator images are inconsistent with the group relations".into(),
                        ));
                    }
                    _ => {}
                }
            }
        }
        for a in 0..modulus {
            if gcd_u(a, modulus) == 1 && table[a as usize].is_none() {
                return Err(Error::Validation("generators do not generate (Z/N)^x".into()));
            }
        }
        Self::from_table(modulus, order, table)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|e| e.is_none_or(|k| k == 0))
    }

    /// Exponent k with χ(a) = ζ_order^k, or None when gcd(a, N) > 1.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        self.table[a.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value(&self, a: i64) -> CyclotomicElement {
        match self.exponent(a) {
            None => CyclotomicElement::zero(),
            Some(k) => CyclotomicElement::zeta_pow(self.order, k as i64),
        }
    }

    /// Integer value for characters of order ≤ 2.
    pub fn value_int(&self, a: i64) -> i64 {
        match self.exponent(a) {
            None => 0,
            Some(0) => 1,
            Some(k) if 2 * k == self.order => -1,
            Some(_) => panic!("value_int on a character of order > 2"),
        }
    }

    /// Smallest d | N such that χ factors through (Z/d)^×.
    pub fn conductor(&self) -> u64 {
        let n = self.modulus;
        for d in divisors(n) {
            let trivial_on_kernel = (0..n)
                .filter(|&a| a % d == 1 % d && gcd_u(a, n) == 1)
                .all(|a| self.table[a as usize] == Some(0));
            if trivial_on_kernel {
                return d;
            }
        }
        n
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The character induced to modulus M (a multiple of N).
    pub fn induce(&self, m: u64) -> Result<Self> {
        if m % self.modulus != 0 {
            return Err(Error::Domain(format!(
                "cannot induce modulus {} to {m}",
                self.modulus
            )));
        }
        let table = (0..m)
            .map(|a| {
                if gcd_u(a, m) == 1 {
                    self.table[(a % self.modulus) as usize]
                } else {
                    None
                }
            })
            .collect();
        Self::from_table_unchecked(m, self.order, table, self.even)
    }

    fn from_table_unchecked(modulus: u64, order: u64, table: Vec<Option<u64>>, even: bool) -> Result<Self> {
        Ok(DirichletCharacter {
            modulus,
            order,
            table,
            even,
        })
    }

    /// Pointwise product of two characters (moduli lifted to the lcm).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let m = lcm_u(self.modulus, other.modulus);
        let a = self.induce(m)?;
        let b = other.induce(m)?;
        let order = lcm_u(self.order, other.order);
        let (sa, sb) = (order / self.order, order / other.order);
        let table = a
            .table
            .iter()
            .zip(b.table.iter())
            .map(|(x, y)| match (x, y) {
                (Some(x), Some(y)) => Some((x * sa + y * sb) % order),
                _ => None,
            })
            .collect();
        Self::from_table_unchecked(m, order, table, a.even == b.even)
    }

    pub fn conj(&self) -> Self {
        let order = self.order;
        DirichletCharacter {
            modulus: self.modulus,
            order,
            table: self
                .table
                .iter()
                .map(|e| e.map(|k| (order - k) % order))
                .collect(),
            even: self.even,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_characters() {
        let chi = DirichletCharacter::kronecker(-7).unwrap();
        assert_eq!(chi.modulus(), 7);
        assert!(!chi.is_even());
        assert!(chi.is_primitive());
        assert_eq!(chi.value_int(2), 1);
        assert_eq!(chi.value_int(3), -1);
        assert_eq!(chi.value_int(7), 0);
        let chi4 = DirichletCharacter::kronecker(-4).unwrap();
        assert_eq!(chi4.value_int(3), -1);
        assert!(chi4.is_primitive());
        let chi8 = DirichletCharacter::kronecker(8).unwrap();
        assert!(chi8.is_even());
        assert!(chi8.is_primitive());
    }

    #[test]
    fn conductor_of_induced() {
        let chi = DirichletCharacter::kronecker(-7).unwrap().induce(21).unwrap();
        assert_eq!(chi.conductor(), 7);
        assert!(!chi.is_primitive());
        assert_eq!(DirichletCharacter::trivial(12).conductor(), 1);
    }

    #[test]
    fn generator_construction() {
        // Order-6 character mod 7 sending the primitive root 3 to ζ_6.
        let chi = DirichletCharacter::from_generators(7, 6, &[(3, 1)]).unwrap();
        assert_eq!(chi.exponent(3), Some(1));
        assert_eq!(chi.exponent(2), Some(2)); // 2 = 3^2 mod 7
        assert!(!chi.is_even());
        let sq = chi.mul(&chi).unwrap();
        assert_eq!(sq.exponent(3), Some(2));
        assert!(DirichletCharacter::from_generators(7, 6, &[(2, 1)]).is_err());
        assert!(DirichletCharacter::from_generators(7, 5, &[(3, 1)]).is_err());
    }

    #[test]
    fn table_validation() {
        let bad = vec![None, Some(0), Some(1), Some(0), Some(0)];
        assert!(DirichletCharacter::from_table(5, 2, bad).is_err());
    }
}
