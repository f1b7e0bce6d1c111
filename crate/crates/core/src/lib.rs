//! Bound states of a quantum particle whose mass falls off as
//! `m(r) = 1/(1 + zeta^2 r^2)^2` in `d` dimensions.
//!
//! The radial problem is mapped by a point canonical transformation onto a
//! constant-mass problem in a finite coordinate `q`, where the effective
//! potential is a generalized Pöschl–Teller well. [`analytic`] holds the exact
//! spectrum and wavefunctions; [`oracle`] re-derives the same energies with a
//! finite-difference eigensolver and checks the radial equation pointwise;
//! [`harness`] runs the cross-checks as sweeps and [`cli`] exposes them on the
//! command line.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
mod error;
pub mod format;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod pct;
pub mod specfun;

pub use analytic::{energy, pt_params, BoundState, PtParams};
pub use error::{Error, Result};
pub use model::{ell_d_of, HalfInteger, MassModel, MassSample, Parity, QuantumNumbers};
pub use oracle::{solve_pt, EigenReport};
pub use pct::PctMap;
