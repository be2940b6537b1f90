//! Central tolerance constants.
//!
//! Structural identities (interface gluing, segment identities, gradient
//! matching) are exact mathematics and get fixed tolerances near machine
//! precision. Discretization-limited checks scale with the grid spacing `h`;
//! their leading constants were calibrated once against the closed-form
//! solutions in [`crate::oracles`] and are not tuned per test.

/// Boundary vanishing requirement for membership in the potential space:
/// |u| on the domain boundary must stay below this.
pub const BOUNDARY_VANISH_TOL: f64 = 1e-9;

/// Default tolerance for deciding equality of two gradient images
/// (interval endpoints in one dimension).
pub const IMAGE_EQUAL_TOL: f64 = 1e-8;

/// Residual target for the segment-endpoint Newton solves. One order below
/// the certified per-node residual so the certificate has slack.
pub const NEWTON_RESIDUAL_TOL: f64 = 1e-13;

/// Certified per-node residual of the foliation solver.
pub const NEWTON_RESIDUAL_CERT: f64 = 1e-12;

/// Segment identity (1-t) xi + t eta = x at every node.
pub const SEGMENT_IDENTITY_TOL: f64 = 1e-10;

/// Gradient matching D phi(xi) = D psi(eta) at every node.
pub const GRADIENT_MATCH_TOL: f64 = 1e-10;

/// Agreement between the hull and linear-programming envelope routes.
pub const HULL_LP_AGREEMENT_TOL: f64 = 1e-9;

/// Exact identities checked by evaluation (interface values, gradients,
/// determinants of transcribed Hessians).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Additive part of the barrier sandwich slack.
pub const SANDWICH_SLACK_ABS: f64 = 1e-9;

/// Grid-proportional part of the barrier sandwich slack: slack = abs + factor * h.
pub const SANDWICH_SLACK_FACTOR: f64 = 5.0;

/// Monge-Ampere degeneracy budget: mean normalized |det D^2_h u| over the
/// checked nodes must stay below factor * h. The creases of a weak geodesic
/// occupy an O(h)-width band of nodes with O(1) stencil pollution, so the
/// mean scales like h exactly; the closed-form solutions measure at about
/// 0.12 h on grids from 129^2 to 513^2, leaving an 8x margin, while
/// non-degenerate inputs (e.g. x^2 + t^2) sit at O(1) and fail.
pub const MA_MEAN_FACTOR: f64 = 1.0;

/// Accepted band for successive blow-up seminorm ratios when the radius
/// halves. The leading Hessian entry scales like 1/r (theoretical ratio 2);
/// off-diagonal contributions at finite radius widen the band.
pub const BLOWUP_RATIO_BAND: (f64, f64) = (1.6, 2.4);

/// Band for the no-blow-up control case (constant-in-time paths).
pub const FLAT_RATIO_BAND: (f64, f64) = (0.8, 1.2);
