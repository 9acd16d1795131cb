//! Minimization of the p-energy of unit-circle-valued maps on ]0,1[ and
//! ]0,1[², together with numerical certification of the minimizers:
//! Euler-Lagrange residuals, convexity (uniqueness) gaps, and the identities
//! the constrained first variation relies on.
//!
//! Two problems are supported:
//! * **A₁**: maps ]0,1[ → S¹ with u(0) = (0,1), u(1) = (1,0); the minimizer
//!   is the quarter-circle geodesic for every p ≥ 2.
//! * **A₂**: maps ]0,1[² → S¹ with prescribed boundary values; with constant
//!   boundary data the minimizer is the constant map with zero energy.
//!
//! Fields live on uniform grids; the circle constraint is enforced exactly
//! at the nodes and preserved by a normalization retraction, so the descent
//! in [`optimize`] never leaves the admissible set. All core math is generic
//! over the scalar type; the `*64`/`*32` aliases below pick a precision.

// `!(x > 0)` deliberately rejects NaN alongside nonpositive values, and the
// two-component stencil loops index several arrays in lockstep, where
// `enumerate` would obscure which array drives the iteration.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod domain;
pub mod energy;
pub mod error;
pub mod io;
pub mod optimize;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{real, Real};

pub type Field64 = domain::VectorField<f64>;
pub type Field32 = domain::VectorField<f32>;
pub type Spec64 = domain::ProblemSpec<f64>;
pub type Spec32 = domain::ProblemSpec<f32>;
pub type Boundary64 = domain::BoundaryData<f64>;
pub type Boundary32 = domain::BoundaryData<f32>;
