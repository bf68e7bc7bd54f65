//! Geometry of `SL₃(ℝ)/SO(3)` and the rank-two representations of the
//! modular group `PSL₂(ℤ)` acting on it by isometries.

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod anosov;
pub mod charvar;
pub mod error;
pub mod flats;
pub mod linalg;
pub mod modgroup;
pub mod precise;
pub mod symspace;
pub mod verify;

pub use error::{GeomError, Result};
