//! Exact arithmetic engine for valuations on two-dimensional regular local
//! rings: blowup sequences, dual graphs, generating-sequence values, and
//! value-semigroup queries.
//!
//! Everything here is exact: integers and rationals are arbitrary precision,
//! quadratic irrationals are compared through continued-fraction brackets,
//! and rank-2 values use lexicographic pairs. No floating point anywhere.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live in
//! the companion `valgraph-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod blowup;
pub mod cf;
pub mod dualgraph;
pub mod poly;
pub mod semigroup;
pub mod spec;
pub mod value;

mod chain;

pub use cf::{ContinuedFraction, Convergent};
pub use poly::BiPoly;
pub use spec::{BlowupKind, ValuationSpec, ValuationType};
pub use value::Value;
