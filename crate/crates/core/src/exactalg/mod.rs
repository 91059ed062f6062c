//! Exact arithmetic substrate: integers and rationals, cyclotomic fields,
//! Dirichlet characters, Bernoulli numbers, Gauss sums and identity testing.

pub mod arith;
pub mod bernoulli;
pub mod bigcomplex;
pub mod cyclotomic;
pub mod dirichlet;
pub mod identity;
pub mod poly;
pub mod rational;

use num_bigint::BigInt;

pub use arith::kronecker_symbol;
pub use bernoulli::generalized_bernoulli;
pub use bigcomplex::{BigComplex, NumCtx};
pub use cyclotomic::CyclotomicElement;
pub use dirichlet::DirichletCharacter;
pub use identity::{verify_rational_identity, IdentityOutcome, RationalExpr};
pub use poly::{MPoly, RatFunc};

use crate::error::{Error, Result};

/// τ(χ) = Σ_{a=1}^{N} χ(a) e^{2πia/N} for a primitive character χ.
pub fn gauss_sum(chi: &DirichletCharacter, ctx: &mut NumCtx) -> Result<BigComplex> {
    if !chi.is_primitive() {
        return Err(Error::Domain(format!(
            "Gauss sum requires a primitive character (modulus {}, conductor {})",
            chi.modulus(),
            chi.conductor()
        )));
    }
    let n = chi.modulus();
    let m = chi.order();
    let mut acc = BigComplex::zero(ctx.bits() + 64);
    // χ(a) e^{2πia/N} = e^{2πi (a m + k N)/(N m)} when χ(a) = ζ_m^k.
    for a in 1..=n {
        if let Some(k) = chi.exponent(a as i64) {
            let num = BigInt::from(a) * m + BigInt::from(k) * n;
            let z = ctx.expi_fraction(&num, &(BigInt::from(n) * m));
            acc = acc.add(&z, ctx);
        }
    }
    Ok(acc)
}
