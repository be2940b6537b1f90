//! Membership in the potential space and gradient images.
//!
//! The space consists of smooth strictly convex functions on the closed
//! domain that vanish on its boundary. Membership is certified by dense
//! sampling of the second derivative together with exact boundary evaluation.

use crate::domain::SpaceDomain;
use crate::error::{Error, Result};
use crate::expr::{ScalarField, Var};
use crate::tolerances::BOUNDARY_VANISH_TOL;

/// Default number of sample points used by membership checks.
pub const DEFAULT_MEMBERSHIP_SAMPLES: usize = 1024;

/// Outcome of a membership check.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialDiagnostics {
    /// Minimum second derivative (the 1d Hessian eigenvalue) over the sample set.
    pub min_hessian_eigenvalue: f64,
    /// Largest |value| over the boundary points.
    pub max_boundary_abs: f64,
    /// True iff the minimum eigenvalue is positive and the boundary values
    /// vanish within tolerance.
    pub member: bool,
}

fn require_space_only(f: &ScalarField) -> Result<()> {
    if f.uses(Var::T) {
        return Err(Error::ArityMismatch(
            "potential must depend on x only".into(),
        ));
    }
    Ok(())
}

/// Certify membership of `f` in the potential space over `dom` by sampling
/// `samples` points of the closed interval, boundary included.
pub fn validate_potential(
    f: &ScalarField,
    dom: &SpaceDomain,
    samples: usize,
) -> Result<PotentialDiagnostics> {
    require_space_only(f)?;
    let (a, b) = dom.as_interval()?;
    let n = samples.max(3);
    let d2 = f.differentiate(Var::X).differentiate(Var::X);
    let mut min_eig = f64::INFINITY;
    for k in 0..n {
        let x = a + (b - a) * (k as f64) / ((n - 1) as f64);
        min_eig = min_eig.min(d2.eval_space(x));
    }
    let max_boundary_abs = f.eval_space(a).abs().max(f.eval_space(b).abs());
    Ok(PotentialDiagnostics {
        min_hessian_eigenvalue: min_eig,
        max_boundary_abs,
        member: min_eig > 0.0 && max_boundary_abs <= BOUNDARY_VANISH_TOL,
    })
}

/// The gradient image of a strictly convex potential: the open interval of
/// derivative values over the domain. In one dimension the derivative is
/// monotone so the image is `(f'(a), f'(b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientImage {
    pub lo: f64,
    pub hi: f64,
}

impl GradientImage {
    pub fn contains(&self, g: f64) -> bool {
        self.lo < g && g < self.hi
    }
}

/// Compute the gradient image, rejecting non-convex inputs.
pub fn gradient_image(
    f: &ScalarField,
    dom: &SpaceDomain,
    samples: usize,
) -> Result<GradientImage> {
    require_space_only(f)?;
    let (a, b) = dom.as_interval()?;
    let diag = validate_potential(f, dom, samples)?;
    if diag.min_hessian_eigenvalue <= 0.0 {
        return Err(Error::NotConvex(format!(
            "min second derivative {} over the domain",
            diag.min_hessian_eigenvalue
        )));
    }
    let d1 = f.differentiate(Var::X);
    Ok(GradientImage {
        lo: d1.eval_space(a),
        hi: d1.eval_space(b),
    })
}

/// Decide whether two potentials have the same gradient image within `tol`
/// on the interval endpoints. This is the exact criterion for a smooth
/// geodesic to join them.
pub fn images_equal(
    f: &ScalarField,
    g: &ScalarField,
    dom: &SpaceDomain,
    tol: f64,
) -> Result<bool> {
    let fi = gradient_image(f, dom, DEFAULT_MEMBERSHIP_SAMPLES)?;
    let gi = gradient_image(g, dom, DEFAULT_MEMBERSHIP_SAMPLES)?;
    Ok((fi.lo - gi.lo).abs() <= tol && (fi.hi - gi.hi).abs() <= tol)
}
