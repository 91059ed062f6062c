//! Arbitrary-precision complex numbers on top of `astro_float`.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

use super::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Working context: precision in bits plus the constant cache of the float
/// library. Every numeric routine takes one; it is cheap to create.
pub struct NumCtx {
    bits: usize,
    cc: Consts,
}

impl NumCtx {
    pub fn new(bits: usize) -> Result<Self> {
        let cc = Consts::new().map_err(|e| Error::Internal(format!("float constants: {e:?}")))?;
        Ok(NumCtx { bits: bits.max(64), cc })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Internal precision with guard bits.
    fn wp(&self) -> usize {
        self.bits + 64
    }

    pub fn int(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, self.wp(), RM, &mut self.cc)
    }

    pub fn rational(&mut self, r: &BigRational) -> BigFloat {
        let n = self.int(r.numer());
        let d = self.int(r.denom());
        n.div(&d, self.wp(), RM)
    }

    pub fn parse(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.wp(), RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        let p = self.wp();
        self.cc.pi(p, RM)
    }

    pub fn sqrt(&mut self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.wp(), RM)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        let p = self.wp();
        x.ln(p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        let p = self.wp();
        x.exp(p, RM, &mut self.cc)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.wp(), RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.wp(), RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.wp(), RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.wp(), RM)
    }

    /// n^s for a positive integer n and rational s.
    pub fn int_pow(&mut self, n: u64, s: &BigRational) -> BigFloat {
        let ln = self.ln(&BigFloat::from_u64(n, self.wp()));
        let e = self.rational(s);
        let t = self.mul(&ln, &e);
        self.exp(&t)
    }

    /// e^{2πi·num/den}.
    pub fn expi_fraction(&mut self, num: &BigInt, den: &BigInt) -> BigComplex {
        let r = num_integer::Integer::mod_floor(num, den);
        let frac = self.rational(&BigRational::new(r, den.clone()));
        let pi = self.pi();
        let two_pi = self.mul(&pi, &BigFloat::from_u8(2, self.wp()));
        let theta = self.mul(&two_pi, &frac);
        let p = self.wp();
        let re = theta.cos(p, RM, &mut self.cc);
        let im = theta.sin(p, RM, &mut self.cc);
        BigComplex { re, im }
    }

    /// Complex embedding of a cyclotomic element, ζ_m ↦ e^{2πi/m}.
    pub fn cyclotomic(&mut self, x: &CyclotomicElement) -> BigComplex {
        let m = BigInt::from(x.order());
        let mut acc = BigComplex::zero(self.wp());
        for (j, c) in x.coeffs().iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let z = self.expi_fraction(&BigInt::from(j), &m);
            let c = self.rational(c);
            acc = acc.add(&z.scale(&c, self), self);
        }
        acc
    }

    pub fn complex(&self, re: BigFloat, im: BigFloat) -> BigComplex {
        BigComplex { re, im }
    }
}

/// Complex number with arbitrary-precision parts.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero(p: usize) -> Self {
        BigComplex {
            re: BigFloat::from_u8(0, p),
            im: BigFloat::from_u8(0, p),
        }
    }

    pub fn add(&self, o: &Self, ctx: &NumCtx) -> Self {
        BigComplex {
            re: ctx.add(&self.re, &o.re),
            im: ctx.add(&self.im, &o.im),
        }
    }

    pub fn sub(&self, o: &Self, ctx: &NumCtx) -> Self {
        BigComplex {
            re: ctx.sub(&self.re, &o.re),
            im: ctx.sub(&self.im, &o.im),
        }
    }

    pub fn mul(&self, o: &Self, ctx: &NumCtx) -> Self {
        let rr = ctx.mul(&self.re, &o.re);
        let ii = ctx.mul(&self.im, &o.im);
        let ri = ctx.mul(&self.re, &o.im);
        let ir = ctx.mul(&self.im, &o.re);
        BigComplex {
            re: ctx.sub(&rr, &ii),
            im: ctx.add(&ri, &ir),
        }
    }

    pub fn div(&self, o: &Self, ctx: &NumCtx) -> Self {
        let den = o.norm_sqr(ctx);
        let conj = BigComplex {
            re: o.re.clone(),
            im: -&o.im,
        };
        let num = self.mul(&conj, ctx);
        BigComplex {
            re: ctx.div(&num.re, &den),
            im: ctx.div(&num.im, &den),
        }
    }

    pub fn scale(&self, r: &BigFloat, ctx: &NumCtx) -> Self {
        BigComplex {
            re: ctx.mul(&self.re, r),
            im: ctx.mul(&self.im, r),
        }
    }

    pub fn norm_sqr(&self, ctx: &NumCtx) -> BigFloat {
        ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im))
    }

    pub fn abs(&self, ctx: &mut NumCtx) -> BigFloat {
        let n = self.norm_sqr(ctx);
        ctx.sqrt(&n)
    }

    /// |self - other| < 10^{-digits}.
    pub fn close_to(&self, other: &Self, digits: u32, ctx: &mut NumCtx) -> bool {
        let d = self.sub(other, ctx).abs(ctx);
        let tol = ctx.parse(&format!("1e-{digits}"));
        d < tol
    }

    /// Lossy conversion for diagnostics.
    pub fn to_f64(&self) -> (f64, f64) {
        (float_to_f64(&self.re), float_to_f64(&self.im))
    }
}

pub fn float_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "{re:.17e} + {im:.17e}i")
    }
}
