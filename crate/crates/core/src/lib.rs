//! Finite-temperature Casimir interaction between two conducting spheres
//! beyond the proximity force approximation.
//!
//! Lengths are in µm and energies in eV throughout; SI values are produced
//! only at the output boundary (see [`units`]).

// `!(x > 0.0)` is used on purpose so that NaN is rejected along with the bad values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod bispherical;
pub mod de_positive;
pub mod error;
pub mod geometry;
pub mod interp;
pub mod lifshitz;
pub mod linalg;
pub mod materials;
pub mod plasma;
pub mod quadrature;
pub mod richardson;
pub mod special;
pub mod sweep;
pub mod units;

pub use error::{CasimirError, Result};
