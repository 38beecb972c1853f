//! Special functions and quadrature rules.

mod hyp;
mod jacobi;
pub mod quadrature;

pub(crate) use hyp::hyp2f1;
pub use hyp::{hyp2f1_c1, Hyp2F1Params, MAX_TERMS, SERIES_REL_TOL, SERIES_SWITCH, X_GUARD};
pub use jacobi::{jacobi_phi, JacobiParams};
pub use quadrature::{composite_nodes, trapezoid_periodic, GaussLegendre};
