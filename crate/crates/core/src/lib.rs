//! Geodesics in the space of strictly convex potentials.
//!
//! The space `S` consists of smooth strictly convex functions on a bounded
//! convex domain that vanish on the boundary, carrying the L2 metric weighted
//! by `det(D^2 u)`. The geodesic between two potentials solves the homogeneous
//! real Monge-Ampere equation on `U x (0,1)` with the potentials as top/bottom
//! boundary data and zero side data.
//!
//! Two solvers are provided:
//!
//! * [`envelope`] computes the weak geodesic as the lower convex hull of the
//!   lifted boundary data (always exists, need not be a curve in `S`);
//! * [`foliation`] constructs the smooth geodesic by the line-segment
//!   foliation whenever the endpoint gradient images coincide, which is the
//!   exact existence criterion.
//!
//! [`oracles`] carries two closed-form piecewise solutions (a real example on
//! `(-1,1)` and a toric example in log coordinates) used as ground truth, and
//! [`verify`] turns the structural claims (degeneracy, convexity, barriers,
//! C^{1,1} bounds, gluing, blow-up, energy) into assertable numerical checks.

pub mod domain;
pub mod envelope;
pub mod error;
pub mod expr;
pub mod foliation;
pub mod grid;
pub mod hull;
pub mod oracles;
pub mod potential;
pub mod simplex;
pub mod tolerances;
pub mod toric;
pub mod verify;

pub use domain::SpaceDomain;
pub use error::{Error, Result};
pub use expr::{ScalarField, Var};
pub use grid::{GridField, Provenance, SpaceTimeGrid};
pub use potential::{GradientImage, PotentialDiagnostics};
