//! Exact, p-adic and high-precision tooling for Rankin-type factorizations of
//! p-adic L-series attached to an elliptic curve and a ring class character of
//! an imaginary quadratic field, and for the elliptic Stark constant that relates
//! an iterated integral to the square of a Heegner point logarithm.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: rationals, cyclotomic fields, Dirichlet characters,
//!   generalized Bernoulli numbers, Gauss sums, rational-function identity testing.
//! * [`quadfield`]: binary quadratic forms, class groups of imaginary quadratic
//!   orders, prime splitting, ideal enumeration, Heegner ideals.
//! * [`heckechar`]: ring class characters and class-number-one characters of
//!   infinity type (0, k).
//! * [`qexp`]: truncated q-expansions with the operators d, U, V, depletion,
//!   stabilisation, Hecke operators and Eisenstein series.
//! * [`theta`]: theta series of Hecke characters.
//! * [`lfun`]: Hecke roots, Rankin local factors and bad Euler ratios.
//! * [`elliptic`]: Weierstrass models, point counting and the group law.
//! * [`padic`]: Q_p arithmetic, logarithms, formal groups, point recovery.
//! * [`factors`]: interpolation factors and the constant λ.
//! * [`cli`]: scenario files, reports and the command implementations.

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod exactalg;
pub mod factors;
pub mod heckechar;
pub mod lfun;
pub mod padic;
pub mod qexp;
pub mod quadfield;
pub mod theta;

pub use error::{Error, Result};
