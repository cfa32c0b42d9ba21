//! Exact verification of torsion packet envelopes for hyperelliptic curves over ℚ.

pub mod algebra;
pub mod error;
pub mod tower;
pub mod curve;
pub mod jacobian;
pub mod tpe;
pub mod families;

pub use error::{Error, Result};
