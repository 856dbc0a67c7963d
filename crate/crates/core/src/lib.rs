#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod characteristic;
pub mod configuration;
pub mod constructions;
pub mod criteria;
pub mod error;
pub mod gaussmap;
pub mod lattice;
pub mod matrix;
pub mod oracle;

pub use characteristic::Characteristic;
pub use error::{Error, Result};
pub use lattice::{IndexSplit, Lattice, QuotientProjection, SmithDecomposition};
pub use matrix::{point, IntegerMatrix};
