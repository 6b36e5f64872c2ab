//! Exact-arithmetic workbench for the middle convolution on tuples of
//! invertible matrices, the braid-group action and its orbits, SL2 trace
//! coordinates, and the passage from GL3 pseudo-reflection triples to SL2
//! triples.
//!
//! All computation is exact over cyclotomic fields Q(zeta_n); nothing here
//! ever rounds.

pub mod error;
pub mod exact;

pub mod braid;
pub mod catalog;
pub mod convolution;
pub mod document;
pub mod reflection;
pub mod sampling;
pub mod slfricke;

pub use error::{Error, Result};
pub use exact::{CycloNum, Matrix};
