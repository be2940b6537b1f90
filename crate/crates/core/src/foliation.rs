//! Smooth geodesics by line-segment foliation.
//!
//! When the endpoint potentials have equal gradient images, the geodesic is
//! affine along a segment `[(xi, 0), (eta, 1)]` through every interior point,
//! with `D phi(xi) = D psi(eta)`. The segment endpoints solve
//!
//! ```text
//! F(t, x, xi) = (1 - t) xi + t (D psi)^{-1}(D phi(xi)) - x = 0,
//! ```
//!
//! whose xi-derivative `(1 - t) + t phi''(xi) / psi''(eta)` is strictly
//! positive, so a bracketed damped Newton iteration is globally reliable.
//! The solution is assembled as `u = t psi(eta) + (1 - t) phi(xi)`.


use serde::Serialize;

use crate::domain::SpaceDomain;
use crate::error::{Error, Result};
use crate::expr::{ScalarField, Var};
use crate::grid::{GridField, Provenance, SpaceTimeGrid};
use crate::potential::{gradient_image, images_equal, validate_potential, DEFAULT_MEMBERSHIP_SAMPLES};
use crate::tolerances::{IMAGE_EQUAL_TOL, NEWTON_RESIDUAL_TOL};

const MAX_NEWTON_ITERS: u32 = 100;

/// A validated potential with cached derivative fields.
#[derive(Debug, Clone)]
pub struct Potential {
    field: ScalarField,
    d1: ScalarField,
    d2: ScalarField,
    d3: ScalarField,
    a: f64,
    b: f64,
}

impl Potential {
    /// Validate membership in the potential space and cache derivatives.
    pub fn new(field: ScalarField, dom: &SpaceDomain) -> Result<Self> {
        let (a, b) = dom.as_interval()?;
        let diag = validate_potential(&field, dom, DEFAULT_MEMBERSHIP_SAMPLES)?;
        if !diag.member {
            return Err(Error::NotConvex(format!(
                "potential `{}` is not in the space (min eigenvalue {:.3e}, boundary {:.3e})",
                field, diag.min_hessian_eigenvalue, diag.max_boundary_abs
            )));
        }
        let d1 = field.differentiate(Var::X);
        let d2 = d1.differentiate(Var::X);
        let d3 = d2.differentiate(Var::X);
        Ok(Potential {
            field,
            d1,
            d2,
            d3,
            a,
            b,
        })
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn f(&self, x: f64) -> f64 {
        self.field.eval_space(x)
    }

    pub fn df(&self, x: f64) -> f64 {
        self.d1.eval_space(x)
    }

    pub fn d2f(&self, x: f64) -> f64 {
        self.d2.eval_space(x)
    }

    pub fn d3f(&self, x: f64) -> f64 {
        self.d3.eval_space(x)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// Solve `psi'(eta) = g` for eta by bracketed Newton; `psi'` is strictly
/// increasing so the bracket never fails. A gradient outside the image of
/// `psi` reports [`Error::NotInImage`].
fn invert_gradient(psi: &Potential, g: f64, warm: f64) -> Result<(f64, u32)> {
    let (a, b) = (psi.a, psi.b);
    let (glo, ghi) = (psi.df(a), psi.df(b));
    let slack = 1e-9 * (1.0 + glo.abs().max(ghi.abs()));
    if g < glo - slack || g > ghi + slack {
        return Err(Error::NotInImage {
            gradient: g,
            lo: glo,
            hi: ghi,
        });
    }
    let tol = NEWTON_RESIDUAL_TOL * (1.0 + g.abs());
    let mut lo = a;
    let mut hi = b;
    let mut eta = warm.clamp(a, b);
    for iter in 0..MAX_NEWTON_ITERS {
        let r = psi.df(eta) - g;
        if r.abs() <= tol {
            return Ok((eta, iter));
        }
        if r > 0.0 {
            hi = eta;
        } else {
            lo = eta;
        }
        let mut next = eta - r / psi.d2f(eta);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        eta = next;
    }
    Err(Error::ConvergenceFailure(format!(
        "gradient inversion for g = {} stalled",
        g
    )))
}

/// `eta = (D psi)^{-1}(D phi(xi))`: the top endpoint of the segment whose
/// bottom endpoint is `xi`.
pub fn eta_from_xi(phi: &Potential, psi: &Potential, xi: f64) -> Result<f64> {
    invert_gradient(psi, phi.df(xi), xi).map(|(eta, _)| eta)
}

/// Determinant of the xi-derivative of the segment map: in one space
/// dimension `(1 - t) + t phi''(xi) / psi''(eta)`. Strictly positive for
/// potentials in the space, which is what makes the Newton solve safe.
pub fn jacobian_det(phi: &Potential, psi: &Potential, xi: f64, t: f64) -> Result<f64> {
    let eta = eta_from_xi(phi, psi, xi)?;
    Ok((1.0 - t) + t * phi.d2f(xi) / psi.d2f(eta))
}

/// Result of one segment solve.
#[derive(Debug, Clone, Copy)]
pub struct SegmentSolve {
    pub xi: f64,
    pub eta: f64,
    pub iters: u32,
    pub residual: f64,
}

/// Solve `F(t, x, xi) = 0` by damped Newton from `xi0`, iterates clamped to
/// the domain. `F` is strictly increasing in xi, so the moving bracket makes
/// the iteration globally convergent; quadratic convergence near the root.
pub fn newton_xi(phi: &Potential, psi: &Potential, x: f64, t: f64, xi0: f64) -> Result<SegmentSolve> {
    let (a, b) = (phi.a, phi.b);
    if t == 0.0 {
        let eta = eta_from_xi(phi, psi, x)?;
        return Ok(SegmentSolve {
            xi: x,
            eta,
            iters: 0,
            residual: 0.0,
        });
    }
    let mut lo = a;
    let mut hi = b;
    let mut xi = xi0.clamp(a, b);
    let mut total_inner = 0u32;
    for iter in 0..MAX_NEWTON_ITERS {
        let (eta, inner) = invert_gradient(psi, phi.df(xi), xi)?;
        total_inner += inner;
        let f = (1.0 - t) * xi + t * eta - x;
        if f.abs() <= NEWTON_RESIDUAL_TOL {
            return Ok(SegmentSolve {
                xi,
                eta,
                iters: iter + total_inner,
                residual: f.abs(),
            });
        }
        if f > 0.0 {
            hi = xi;
        } else {
            lo = xi;
        }
        let jac = (1.0 - t) + t * phi.d2f(xi) / psi.d2f(eta);
        let mut next = xi - f / jac;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        xi = next;
    }
    Err(Error::ConvergenceFailure(format!(
        "segment solve at (x, t) = ({}, {})",
        x, t
    )))
}

/// Per-node segment endpoints of the foliation, with solver statistics.
#[derive(Debug, Clone)]
pub struct FoliationMap {
    pub grid: SpaceTimeGrid,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub iters: Vec<u32>,
    pub residuals: Vec<f64>,
}

impl FoliationMap {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// JSON export: one record per node.
    pub fn write_json(&self, w: &mut impl std::io::Write) -> Result<()> {
        #[derive(Serialize)]
        struct Node {
            x: f64,
            t: f64,
            xi: f64,
            eta: f64,
            iters: u32,
            residual: f64,
        }
        #[derive(Serialize)]
        struct Doc {
            nodes: Vec<Node>,
        }
        let mut nodes = Vec::with_capacity(self.grid.len());
        for j in 0..self.grid.nt() {
            for i in 0..self.grid.nx() {
                let k = self.grid.idx(i, j);
                nodes.push(Node {
                    x: self.grid.x(i),
                    t: self.grid.t(j),
                    xi: self.xi[k],
                    eta: self.eta[k],
                    iters: self.iters[k],
                    residual: self.residuals[k],
                });
            }
        }
        serde_json::to_writer(&mut *w, &Doc { nodes })
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        writeln!(w)?;
        Ok(())
    }
}

/// A smooth geodesic: the foliation, the assembled solution values, and the
/// minimum second space derivative over the grid (strictly positive).
#[derive(Debug, Clone)]
pub struct SmoothGeodesic {
    pub phi: Potential,
    pub psi: Potential,
    pub map: FoliationMap,
    pub u: GridField,
    pub min_space_hessian: f64,
}

/// Construct the smooth geodesic between `phi0` and `phi1` on `grid`.
/// Equal gradient images are a hard gate: without them the construction
/// fails with [`Error::NotSmoothlyConnectable`] before any Newton work.
pub fn smooth_geodesic(
    phi0: &ScalarField,
    phi1: &ScalarField,
    dom: &SpaceDomain,
    grid: &SpaceTimeGrid,
) -> Result<SmoothGeodesic> {
    smooth_geodesic_with_tol(phi0, phi1, dom, grid, IMAGE_EQUAL_TOL)
}

pub fn smooth_geodesic_with_tol(
    phi0: &ScalarField,
    phi1: &ScalarField,
    dom: &SpaceDomain,
    grid: &SpaceTimeGrid,
    image_tol: f64,
) -> Result<SmoothGeodesic> {
    if !images_equal(phi0, phi1, dom, image_tol)? {
        let i0 = gradient_image(phi0, dom, DEFAULT_MEMBERSHIP_SAMPLES)?;
        let i1 = gradient_image(phi1, dom, DEFAULT_MEMBERSHIP_SAMPLES)?;
        return Err(Error::NotSmoothlyConnectable(format!(
            "gradient images ({}, {}) and ({}, {}) differ",
            i0.lo, i0.hi, i1.lo, i1.hi
        )));
    }
    let phi = Potential::new(phi0.clone(), dom)?;
    let psi = Potential::new(phi1.clone(), dom)?;

    let nx = grid.nx();
    let nt = grid.nt();
    let mut xi = vec![0.0f64; grid.len()];
    let mut eta = vec![0.0f64; grid.len()];
    let mut iters = vec![0u32; grid.len()];
    let mut residuals = vec![0.0f64; grid.len()];
    let mut values = vec![0.0f64; grid.len()];
    let mut min_hess = f64::INFINITY;

    for j in 0..nt {
        let t = grid.t(j);
        for i in 0..nx {
            let x = grid.x(i);
            let k = grid.idx(i, j);
            let solve = if j == nt - 1 {
                // t = 1: eta = x exactly, xi from phi'(xi) = psi'(x)
                let (xi1, inner) = invert_gradient(&phi, psi.df(x), x).map_err(|e| match e {
                    Error::NotInImage { gradient, lo, hi } => Error::NotSmoothlyConnectable(
                        format!("gradient {} escapes the image ({}, {})", gradient, lo, hi),
                    ),
                    e => e,
                })?;
                SegmentSolve {
                    xi: xi1,
                    eta: x,
                    iters: inner,
                    residual: 0.0,
                }
            } else {
                let warm = if j == 0 { x } else { xi[grid.idx(i, j - 1)] };
                newton_xi(&phi, &psi, x, t, warm).map_err(|e| {
                    Error::ConvergenceFailure(format!("node ({}, {}): {}", x, t, e))
                })?
            };
            xi[k] = solve.xi;
            eta[k] = solve.eta;
            iters[k] = solve.iters;
            residuals[k] = solve.residual;
            values[k] = t * psi.f(solve.eta) + (1.0 - t) * phi.f(solve.xi);
            let (d2, _) = hessian_parts(&phi, &psi, solve.xi, solve.eta, t, 1.0);
            min_hess = min_hess.min(d2);
        }
    }

    let map = FoliationMap {
        grid: grid.clone(),
        xi,
        eta,
        iters,
        residuals,
    };
    let u = GridField::new(grid.clone(), values, Provenance::Foliation)?;
    Ok(SmoothGeodesic {
        phi,
        psi,
        map,
        u,
        min_space_hessian: min_hess,
    })
}

/// Second space derivative of the geodesic along direction `dir`, plus the
/// cross term that vanishes by the gradient matching. `xi_x` and `eta_x`
/// come from the linearized segment system, not from grid differencing.
fn hessian_parts(phi: &Potential, psi: &Potential, xi: f64, eta: f64, t: f64, dir: f64) -> (f64, f64) {
    let m = phi.d2f(xi) / psi.d2f(eta);
    let jac = (1.0 - t) + t * m;
    let xi_x = 1.0 / jac;
    let eta_x = m * xi_x;
    let d2 = (t * psi.d2f(eta) * eta_x * eta_x + (1.0 - t) * phi.d2f(xi) * xi_x * xi_x) * dir * dir;
    // second derivatives of the endpoint maps, for the vanishing cross term
    let m_prime = (phi.d3f(xi) - m * m * psi.d3f(eta)) / psi.d2f(eta);
    let xi_xx = -t * m_prime * xi_x * xi_x / jac;
    let eta_xx = m_prime * xi_x * xi_x + m * xi_xx;
    let cross = (t * psi.df(eta) * eta_xx + (1.0 - t) * phi.df(xi) * xi_xx) * dir * dir;
    (d2, cross)
}

/// `D^2_{TT} u` at an arbitrary interior point, by a fresh segment solve.
pub fn space_hessian(g: &SmoothGeodesic, x: f64, t: f64, dir: f64) -> Result<f64> {
    let solve = newton_xi(&g.phi, &g.psi, x, t, x)?;
    let (d2, _) = hessian_parts(&g.phi, &g.psi, solve.xi, solve.eta, t, dir);
    Ok(d2)
}

/// The cross term of the second-derivative expansion, asserted tiny in tests.
pub fn space_hessian_cross_term(g: &SmoothGeodesic, x: f64, t: f64, dir: f64) -> Result<f64> {
    let solve = newton_xi(&g.phi, &g.psi, x, t, x)?;
    let (_, cross) = hessian_parts(&g.phi, &g.psi, solve.xi, solve.eta, t, dir);
    Ok(cross)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::{GRADIENT_MATCH_TOL, SEGMENT_IDENTITY_TOL};

    fn dom() -> SpaceDomain {
        SpaceDomain::interval(-1.0, 1.0).unwrap()
    }

    fn field(s: &str) -> ScalarField {
        ScalarField::parse(s).unwrap()
    }

    fn pot(s: &str) -> Potential {
        Potential::new(field(s), &dom()).unwrap()
    }

    #[test]
    fn eta_identity_for_equal_potentials() {
        let phi = pot("x^2-1");
        let psi = pot("x^2-1");
        let eta = eta_from_xi(&phi, &psi, 0.37).unwrap();
        assert!((eta - 0.37).abs() < 1e-12);
    }

    #[test]
    fn eta_scalar_arithmetic() {
        // phi' = 4 xi, psi' = 2 eta, so eta = 2 xi
        let phi = pot("2*(x^2-1)");
        let psi = pot("x^2-1");
        let eta = eta_from_xi(&phi, &psi, 0.3).unwrap();
        assert!((eta - 0.6).abs() < 1e-12);
    }

    #[test]
    fn eta_escapes_domain() {
        let phi = pot("2*(x^2-1)");
        let psi = pot("x^2-1");
        match eta_from_xi(&phi, &psi, 0.6) {
            Err(Error::NotInImage { gradient, lo, hi }) => {
                assert!((gradient - 2.4).abs() < 1e-12);
                assert!((lo + 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
            }
            other => panic!("expected NotInImage, got {:?}", other),
        }
    }

    #[test]
    fn jacobian_scalar_formula() {
        let phi = pot("2*(x^2-1)");
        let psi = pot("x^2-1");
        // (1-t) + t * 4/2 at t = 1/2 is 1.5
        let j = jacobian_det(&phi, &psi, 0.2, 0.5).unwrap();
        assert!((j - 1.5).abs() < 1e-12);
        assert!((jacobian_det(&phi, &psi, 0.2, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let phi2 = pot("x^2-1");
        let psi2 = pot("x^2-1");
        for t in [0.1, 0.5, 0.9] {
            assert!((jacobian_det(&phi2, &psi2, 0.3, t).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn newton_identity_pair_is_immediate() {
        let phi = pot("x^2-1");
        let psi = pot("x^2-1");
        for (x, t) in [(0.0, 0.5), (-0.7, 0.2), (0.9, 0.99)] {
            let s = newton_xi(&phi, &psi, x, t, x).unwrap();
            assert!((s.xi - x).abs() < 1e-12);
            assert!(s.residual <= NEWTON_RESIDUAL_TOL);
        }
    }

    #[test]
    fn newton_at_t_zero_returns_x() {
        let phi = pot("x^2-1");
        let psi = pot("x^2-1+0.1*(1-x^2)^2");
        let s = newton_xi(&phi, &psi, 0.4, 0.0, -0.9).unwrap();
        assert_eq!(s.xi, 0.4);
        assert_eq!(s.residual, 0.0);
    }

    #[test]
    fn newton_matches_bisection_oracle() {
        // independent check: bisection on the monotone map
        // xi -> (1-t) xi + t eta(xi)
        let phi = pot("x^2-1");
        let psi = pot("x^2-1+0.1*(1-x^2)^2");
        let (x, t) = (0.4, 0.5);
        let g = |xi: f64| (1.0 - t) * xi + t * eta_from_xi(&phi, &psi, xi).unwrap() - x;
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let bisected = 0.5 * (lo + hi);
        let s = newton_xi(&phi, &psi, x, t, 0.0).unwrap();
        assert!(s.residual <= NEWTON_RESIDUAL_TOL);
        assert!(
            (s.xi - bisected).abs() < 1e-12,
            "newton {} vs bisection {}",
            s.xi,
            bisected
        );
    }

    #[test]
    fn unequal_images_not_smoothly_connectable() {
        let g = SpaceTimeGrid::over_interval(-1.0, 1.0, 9, 9).unwrap();
        match smooth_geodesic(&field("2*(x^2-1)"), &field("x^2-1"), &dom(), &g) {
            Err(Error::NotSmoothlyConnectable(msg)) => {
                assert!(msg.contains("-4") && msg.contains("-2"), "{}", msg);
            }
            other => panic!("expected NotSmoothlyConnectable, got {:?}", other),
        }
    }

    #[test]
    fn constant_path_geodesic() {
        let g = SpaceTimeGrid::over_interval(-1.0, 1.0, 17, 17).unwrap();
        let geo = smooth_geodesic(&field("x^2-1"), &field("x^2-1"), &dom(), &g).unwrap();
        for j in 0..g.nt() {
            for i in 0..g.nx() {
                let x = g.x(i);
                assert!((geo.u.value(i, j) - (x * x - 1.0)).abs() < 1e-12);
                let k = g.idx(i, j);
                assert!((geo.map.xi[k] - x).abs() < 1e-12);
                assert!((geo.map.eta[k] - x).abs() < 1e-12);
            }
        }
        assert!(geo.min_space_hessian > 1.9);
    }

    #[test]
    fn derived_pair_invariants() {
        let g = SpaceTimeGrid::over_interval(-1.0, 1.0, 33, 33).unwrap();
        let geo = smooth_geodesic(
            &field("x^2-1"),
            &field("x^2-1+0.1*(1-x^2)^2"),
            &dom(),
            &g,
        )
        .unwrap();
        assert!(geo.map.max_residual() <= NEWTON_RESIDUAL_TOL);
        for j in 0..g.nt() {
            let t = g.t(j);
            for i in 0..g.nx() {
                let k = g.idx(i, j);
                let (xi, eta) = (geo.map.xi[k], geo.map.eta[k]);
                // segment identity
                assert!(((1.0 - t) * xi + t * eta - g.x(i)).abs() <= SEGMENT_IDENTITY_TOL);
                // gradient matching
                assert!((geo.phi.df(xi) - geo.psi.df(eta)).abs() <= GRADIENT_MATCH_TOL);
            }
        }
        assert!(geo.min_space_hessian > 0.0);
        // endpoint rows are exact
        for i in 0..g.nx() {
            let x = g.x(i);
            assert_eq!(geo.u.value(i, 0), geo.phi.f(x));
            assert_eq!(geo.u.value(i, g.nt() - 1), geo.psi.f(x));
        }
    }

    #[test]
    fn linear_along_segments() {
        let g = SpaceTimeGrid::over_interval(-1.0, 1.0, 17, 17).unwrap();
        let geo = smooth_geodesic(
            &field("x^2-1"),
            &field("x^2-1+0.1*(1-x^2)^2"),
            &dom(),
            &g,
        )
        .unwrap();
        // pick interior nodes, follow their segment, re-solve at fractions
        for (i, j) in [(8, 8), (4, 12), (12, 3)] {
            let k = g.idx(i, j);
            let (xi, eta) = (geo.map.xi[k], geo.map.eta[k]);
            let ends = (geo.phi.f(xi), geo.psi.f(eta));
            for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let xs = (1.0 - s) * xi + s * eta;
                let solve = newton_xi(&geo.phi, &geo.psi, xs, s, xi).unwrap();
                let u = s * geo.psi.f(solve.eta) + (1.0 - s) * geo.phi.f(solve.xi);
                let affine = (1.0 - s) * ends.0 + s * ends.1;
                assert!(
                    (u - affine).abs() <= 1e-9,
                    "deviation {} at s = {}",
                    (u - affine).abs(),
                    s
                );
            }
        }
    }

    #[test]
    fn space_hessian_for_identity_pair() {
        let g = SpaceTimeGrid::over_interval(-1.0, 1.0, 9, 9).unwrap();
        let geo = smooth_geodesic(&field("x^2-1"), &field("x^2-1"), &dom(), &g).unwrap();
        // xi = eta = x, so the Hessian is phi''(x) |T|^2 = 2
        let d2 = space_hessian(&geo, 0.3, 0.5, 1.0).unwrap();
        assert!((d2 - 2.0).abs() < 1e-10);
        let scaled = space_hessian(&geo, 0.3, 0.5, 2.0).unwrap();
        assert!((scaled - 8.0).abs() < 1e-10);
    }

    #[test]
    fn space_hessian_matches_finite_difference() {
        let g = SpaceTimeGrid::over_interval(-1.0, 1.0, 129, 129).unwrap();
        let geo = smooth_geodesic(
            &field("x^2-1"),
            &field("x^2-1+0.1*(1-x^2)^2"),
            &dom(),
            &g,
        )
        .unwrap();
        // nearest node to (0.4, 0.5)
        let i = ((0.4 + 1.0) / g.hx()).round() as usize;
        let j = (0.5 / g.ht()).round() as usize;
        let (x, t) = (g.x(i), g.t(j));
        let d2 = space_hessian(&geo, x, t, 1.0).unwrap();
        let fd = (geo.u.value(i + 1, j) + geo.u.value(i - 1, j) - 2.0 * geo.u.value(i, j))
            / (g.hx() * g.hx());
        assert!(
            (d2 - fd).abs() <= 10.0 * g.hx() * g.hx(),
            "implicit {} vs finite difference {}",
            d2,
            fd
        );
        // the analytically-vanishing cross term stays numerically tiny
        let cross = space_hessian_cross_term(&geo, x, t, 1.0).unwrap();
        assert!(cross.abs() <= 1e-9);
    }

    #[test]
    fn time_symmetry() {
        let g = SpaceTimeGrid::over_interval(-1.0, 1.0, 33, 33).unwrap();
        let fwd = smooth_geodesic(
            &field("x^2-1"),
            &field("x^2-1+0.1*(1-x^2)^2"),
            &dom(),
            &g,
        )
        .unwrap();
        let bwd = smooth_geodesic(
            &field("x^2-1+0.1*(1-x^2)^2"),
            &field("x^2-1"),
            &dom(),
            &g,
        )
        .unwrap();
        for j in 0..g.nt() {
            for i in 0..g.nx() {
                let u1 = fwd.u.value(i, j);
                let u2 = bwd.u.value(i, g.nt() - 1 - j);
                assert!((u1 - u2).abs() <= 1e-10, "asymmetry {} at ({}, {})", (u1 - u2).abs(), i, j);
            }
        }
    }

    #[test]
    fn foliation_json_has_node_records() {
        let g = SpaceTimeGrid::over_interval(-1.0, 1.0, 5, 5).unwrap();
        let geo = smooth_geodesic(&field("x^2-1"), &field("x^2-1"), &dom(), &g).unwrap();
        let mut buf = Vec::new();
        geo.map.write_json(&mut buf).unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["nodes"].as_array().unwrap().len(), 25);
        assert!(doc["nodes"][0]["residual"].is_number());
    }
}
