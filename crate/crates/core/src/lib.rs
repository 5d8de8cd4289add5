//! Rotational and helicoidal translators of the quarter-power Gauss curvature
//! flow in Euclidean 3-space.
//!
//! A surface is a translator of this flow when its Gaussian curvature equals
//! the fourth power of its angle function (the vertical component of the unit
//! normal).  This crate constructs the full two-parameter moduli of such
//! surfaces with helicoidal symmetry and certifies every defining identity
//! numerically:
//!
//! * [`family`] — the cylinder branch, the rotational members with closed-form
//!   height profiles, and the helicoidal members built by quadrature of the
//!   generating data, together with the screw motion and the isometric
//!   deformation path in the pitch parameter.
//! * [`bour`] — Bour coordinates for an arbitrary helicoidal seed surface,
//!   recovery of the generating datum from the Bour function, and the
//!   two-parameter isometric family it induces.
//! * [`surface`] — generic parametric patches with analytic or
//!   finite-difference jets, fundamental forms, normals and curvature.
//! * [`quadrature`] — Gauss–Legendre panels, adaptive integration and
//!   cumulative integral tables with monotone inversion.
//! * [`verify`] — grid-based residual checks producing machine-readable
//!   reports for each geometric identity.
//! * [`io`] — mesh, profile-table and report serialization.

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bour;
pub mod error;
pub mod family;
pub mod io;
pub mod quadrature;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod testutil;
