//! Imaginary quadratic fields and their orders: reduced forms, ring class
//! groups, prime splitting, ideals and principal generators.

pub mod classgroup;
pub mod element;
pub mod field;
pub mod form;
pub mod snf;

pub use classgroup::ClassGroup;
pub use element::QuadNum;
pub use field::{embedding_root, Ideal, ImagQuadField, Kind, Order, PrimeIdeal, PrimeSplitting};
pub use form::{reduced_forms, QuadForm};

use crate::error::Result;

/// Class group of the given negative discriminant.
pub fn class_group(disc: i64) -> Result<ClassGroup> {
    ClassGroup::new(disc)
}
