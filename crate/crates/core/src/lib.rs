//! Exact verification engine for reduced rank-2 Hitchin systems on hyperelliptic
//! curves of genus 2 and 3, together with the Lagrange interpolation integrable
//! system and complex flow integration of the reduced equations.
//!
//! Exact work happens over a scalar tower: rationals, first-order jets that carry
//! a sparse gradient, and truncated Laurent series in an auxiliary parameter `ε`
//! whose coefficients are jets. Every derivative is read off a jet, so a single
//! evaluation of the Hamiltonian yields the whole vector field.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod closed_form;
pub mod coeff;
pub mod curve;
pub mod error;
pub mod exact;
pub mod flows;
pub mod hamiltonian;
pub mod lagrange;
pub mod laurent;
pub mod lax;
pub mod linsolve;
pub mod reduction;
pub mod report;

pub use coeff::Coeff;
pub use curve::CurveSpec;
pub use error::Error;
pub use exact::{Assignment, Jet, Rational, Scalar, VarId};
pub use hamiltonian::HamiltonianSpec;
pub use laurent::LaurentSeries;
pub use lax::{LaxCoeffs, PhasePoint};
pub use reduction::ConstraintSet;
