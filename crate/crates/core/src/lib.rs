//! Heat kernel on SL(2,ℝ) by spectral synthesis over the τ_n-spherical dual,
//! together with the numerical oracles used to check it.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod group;
pub mod specfun;
pub mod spectrum;
pub mod spherical;
pub mod synthesis;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
