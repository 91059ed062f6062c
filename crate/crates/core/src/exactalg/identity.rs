//! Grid-sampling verifier for identities between rational functions.
//!
//! If P is a polynomial of degree at most d in each of n variables and P
//! vanishes on S_1 × ... × S_n with |S_i| = d + 1, then P = 0. Applied to the
//! numerator of lhs − rhs this turns finitely many exact evaluations into a
//! proof, provided the degree bound is honest.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::RatFunc;
use crate::error::{Error, Result};

/// Anything that can be evaluated at a rational point, returning None at poles.
pub trait RationalExpr {
    fn eval_at(&self, point: &[BigRational]) -> Option<BigRational>;
}

impl RationalExpr for RatFunc {
    fn eval_at(&self, point: &[BigRational]) -> Option<BigRational> {
        self.eval(point)
    }
}

impl<F> RationalExpr for F
where
    F: Fn(&[BigRational]) -> Option<BigRational>,
{
    fn eval_at(&self, point: &[BigRational]) -> Option<BigRational> {
        self(point)
    }
}

pub const MAX_RESAMPLES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub holds: bool,
    pub samples: usize,
    pub resamples: usize,
    pub seed: u64,
    /// First disagreeing point, if any.
    pub witness: Option<Vec<BigRational>>,
}

fn sample_set(rng: &mut ChaCha8Rng, size: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(size);
    while out.len() < size {
        let n: i64 = rng.gen_range(-997..=997);
        let d: i64 = rng.gen_range(1..=61);
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Checks lhs = rhs on a (degree_bound + 1)^nvars grid of seeded rational points.
///
/// A pole of either side anywhere on the grid triggers a fresh grid, up to
/// [`MAX_RESAMPLES`] times.
pub fn verify_rational_identity(
    lhs: &dyn RationalExpr,
    rhs: &dyn RationalExpr,
    nvars: usize,
    degree_bound: u32,
    seed: u64,
) -> Result<IdentityOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = degree_bound as usize + 1;
    let total = size.checked_pow(nvars as u32).unwrap_or(usize::MAX);
    if total > 2_000_000 {
        return Err(Error::Resource(format!("{total} sample points requested")));
    }
    'attempt: for attempt in 0..=MAX_RESAMPLES {
        let sets: Vec<Vec<BigRational>> = (0..nvars).map(|_| sample_set(&mut rng, size)).collect();
        let mut idx = vec![0usize; nvars];
        let mut witness = None;
        loop {
            let point: Vec<BigRational> = idx.iter().zip(&sets).map(|(&i, s)| s[i].clone()).collect();
            let (Some(l), Some(r)) = (lhs.eval_at(&point), rhs.eval_at(&point)) else {
                continue 'attempt;
            };
            if l != r && witness.is_none() {
                witness = Some(point);
            }
            // odometer increment
            let mut k = 0;
            loop {
                if k == nvars {
                    return Ok(IdentityOutcome {
                        holds: witness.is_none(),
                        samples: total,
                        resamples: attempt,
                        seed,
                        witness,
                    });
                }
                idx[k] += 1;
                if idx[k] < size {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    Err(Error::Degenerate(format!(
        "every sample grid hit a pole after {MAX_RESAMPLES} resamples"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::RatFunc;

    #[test]
    fn simple_identities() {
        let x = RatFunc::var(1, 0);
        let one = RatFunc::int(1, 1);
        let lhs = x.mul(&x).sub(&one).div(&x.sub(&one));
        let rhs = x.add(&one);
        let out = verify_rational_identity(&lhs, &rhs, 1, 2, 7).unwrap();
        assert!(out.holds);
        assert_eq!(out.samples, 3);
        let sq = x.mul(&x);
        let out = verify_rational_identity(&sq, &x, 1, 2, 7).unwrap();
        assert!(!out.holds);
        assert!(out.witness.is_some());
    }

    #[test]
    fn deterministic_given_seed() {
        let f = |p: &[BigRational]| Some(&p[0] * &p[1]);
        let g = |p: &[BigRational]| Some(&p[1] * &p[0]);
        let a = verify_rational_identity(&f, &g, 2, 3, 11).unwrap();
        let b = verify_rational_identity(&f, &g, 2, 3, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.holds);
        assert_eq!(a.samples, 16);
    }

    #[test]
    fn pole_everywhere_exhausts() {
        let f = |_: &[BigRational]| None;
        let g = |_: &[BigRational]| Some(BigRational::from_integer(1.into()));
        assert!(verify_rational_identity(&f, &g, 1, 1, 0).is_err());
    }
}
