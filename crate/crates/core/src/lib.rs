//! Exact arithmetic for divided-power differential operators on F_p[x] and
//! the two-generator Frobenius-descent modules they act on.
//!
//! The crate computes operator actions, Bernstein-filtration dimensions by
//! exact row reduction, and compares the results against the closed-form
//! tables it implements. No floating point enters any computation; floats
//! appear only as display approximations inside reports.

pub mod diffop;
pub mod error;
pub mod fieldpoly;
pub mod filtration;
pub mod frobmod;
pub(crate) mod par;
pub mod verify;

pub use error::{Error, Result};
