//! The weak geodesic as a discrete convex envelope.
//!
//! The Dirichlet problem for the homogeneous Monge-Ampere equation on
//! `U x (0,1)` is solved by the envelope of its boundary data: the largest
//! convex function lying below the prescribed values on the parabolic
//! boundary. Discretely this is the lower convex hull of the lifted boundary
//! samples, so the interior needs no unknowns at all. A per-query linear
//! program provides a second, dimension-agnostic route to the same values;
//! the two routes are kept independent and cross-checked in tests.


use serde::Serialize;

use crate::domain::SpaceDomain;
use crate::error::{Error, Result};
use crate::expr::ScalarField;
use crate::grid::{GridField, Provenance, SpaceTimeGrid};
use crate::hull;
use crate::simplex;
use crate::tolerances::BOUNDARY_VANISH_TOL;

/// Samples of the boundary data on `∂(U x (0,1))`: the two potentials on the
/// bottom and top faces, zero on the sides. Corner points are sampled once.
#[derive(Debug, Clone)]
pub struct BoundarySamples {
    /// Sample locations; for a 1d space domain each point is `[x, t]`.
    pub points: Vec<Vec<f64>>,
    /// Boundary value at each sample.
    pub values: Vec<f64>,
    /// Samples per face: bottom (t=0), top (t=1), sides.
    pub face_counts: [usize; 3],
}

/// Sample the four faces of the space-time boundary at grid resolution.
/// The potentials must vanish at the domain endpoints so the corner values
/// are compatible; corners are sampled once, on the t-faces, with value 0.
pub fn assemble_boundary(
    phi0: &ScalarField,
    phi1: &ScalarField,
    dom: &SpaceDomain,
    grid: &SpaceTimeGrid,
) -> Result<BoundarySamples> {
    let (a, b) = dom.as_interval()?;
    for (name, f) in [("phi0", phi0), ("phi1", phi1)] {
        let worst = f.eval_space(a).abs().max(f.eval_space(b).abs());
        if worst > BOUNDARY_VANISH_TOL {
            return Err(Error::BoundaryValue(format!(
                "{} does not vanish on the domain boundary (|value| = {:.3e})",
                name, worst
            )));
        }
    }
    let nx = grid.nx();
    let nt = grid.nt();
    let mut points = Vec::with_capacity(2 * nx + 2 * (nt - 2));
    let mut values = Vec::with_capacity(points.capacity());
    let corner = |i: usize| i == 0 || i == nx - 1;
    for i in 0..nx {
        points.push(vec![grid.x(i), 0.0]);
        values.push(if corner(i) { 0.0 } else { phi0.eval_space(grid.x(i)) });
    }
    for i in 0..nx {
        points.push(vec![grid.x(i), 1.0]);
        values.push(if corner(i) { 0.0 } else { phi1.eval_space(grid.x(i)) });
    }
    for j in 1..nt - 1 {
        points.push(vec![a, grid.t(j)]);
        values.push(0.0);
        points.push(vec![b, grid.t(j)]);
        values.push(0.0);
    }
    Ok(BoundarySamples {
        points,
        values,
        face_counts: [nx, nx, 2 * (nt - 2)],
    })
}

/// The discrete envelope: lower facets of the convex hull of the lifted
/// boundary samples, with affine coefficients and an x-strip point-location
/// index. The envelope function is the pointwise maximum of the facet planes,
/// which dominates the continuum envelope and decreases monotonically under
/// boundary refinement.
#[derive(Debug, Clone)]
pub struct HullEnvelope {
    points: Vec<[f64; 3]>,
    facets: Vec<[usize; 3]>,
    /// Facet plane `g = c0 * x + c1 * t + c2`.
    planes: Vec<[f64; 3]>,
    strips: Vec<Vec<u32>>,
    x_lo: f64,
    x_hi: f64,
}

/// Active boundary points realizing the envelope value at a query point, with
/// their convex weights: at most three in space-time dimension two, and the
/// weighted points reproduce both the query and the envelope value.
#[derive(Debug, Clone)]
pub struct ContactSet {
    pub facet: usize,
    pub vertices: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Lower-hull solve of the envelope for a 1d space domain.
pub fn solve_envelope_hull(b: &BoundarySamples) -> Result<HullEnvelope> {
    if b.points.iter().any(|p| p.len() != 2) {
        return Err(Error::ArityMismatch(
            "hull envelope requires space-time dimension 2".into(),
        ));
    }
    let lifted: Vec<[f64; 3]> = b
        .points
        .iter()
        .zip(&b.values)
        .map(|(p, &g)| [p[0], p[1], g])
        .collect();
    let hull = hull::convex_hull_3d(&lifted)?;

    let mut facets = Vec::new();
    let mut planes = Vec::new();
    for (k, f) in hull.facets.iter().enumerate() {
        let n = hull.normals[k];
        if n[2] >= -1e-12 {
            continue; // keep only downward-facing facets
        }
        let c0 = -n[0] / n[2];
        let c1 = -n[1] / n[2];
        let c2 = hull.offsets[k] / n[2];
        facets.push(*f);
        planes.push([c0, c1, c2]);
    }
    if facets.is_empty() {
        return Err(Error::Degenerate("no lower facets".into()));
    }

    let x_lo = lifted.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let x_hi = lifted
        .iter()
        .map(|p| p[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let nstrips = (facets.len() as f64).sqrt().ceil() as usize + 16;
    let mut strips = vec![Vec::new(); nstrips];
    let width = (x_hi - x_lo) / nstrips as f64;
    for (k, f) in facets.iter().enumerate() {
        let xs = [lifted[f[0]][0], lifted[f[1]][0], lifted[f[2]][0]];
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s_lo = strip_of(lo, x_lo, width, nstrips);
        let s_hi = strip_of(hi, x_lo, width, nstrips);
        for s in s_lo..=s_hi {
            strips[s].push(k as u32);
        }
    }

    Ok(HullEnvelope {
        points: lifted,
        facets,
        planes,
        strips,
        x_lo,
        x_hi,
    })
}

fn strip_of(x: f64, x_lo: f64, width: f64, nstrips: usize) -> usize {
    if width <= 0.0 {
        return 0;
    }
    (((x - x_lo) / width) as usize).min(nstrips - 1)
}

impl HullEnvelope {
    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn facets(&self) -> &[[usize; 3]] {
        &self.facets
    }

    /// Envelope value at `(x, t)`: the maximum of the lower facet planes.
    /// Planes of facets not containing the query evaluate below the surface,
    /// so the maximum over any superset of the containing facet is exact.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.locate(x, t).1
    }

    /// Facet index realizing the envelope at `(x, t)` (lowest index on ties)
    /// and the envelope value.
    pub fn locate(&self, x: f64, t: f64) -> (usize, f64) {
        let width = (self.x_hi - self.x_lo) / self.strips.len() as f64;
        let s = strip_of(
            x.clamp(self.x_lo, self.x_hi),
            self.x_lo,
            width,
            self.strips.len(),
        );
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for &k in &self.strips[s] {
            let p = self.planes[k as usize];
            let v = p[0] * x + p[1] * t + p[2];
            if v > best.1 {
                best = (k as usize, v);
            }
        }
        debug_assert!(best.0 != usize::MAX);
        best
    }

    /// Evaluate the envelope over a grid.
    pub fn sample(&self, grid: SpaceTimeGrid) -> Result<GridField> {
        GridField::sample(grid, Provenance::Envelope, |x, t| self.eval(x, t))
    }

    fn barycentric(&self, k: usize, x: f64, t: f64) -> Option<[f64; 3]> {
        let f = self.facets[k];
        let v = [self.points[f[0]], self.points[f[1]], self.points[f[2]]];
        let det = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1])
            - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
        if det.abs() < 1e-14 {
            return None;
        }
        let l1 = ((x - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (t - v[0][1])) / det;
        let l2 = ((v[1][0] - v[0][0]) * (t - v[0][1]) - (x - v[0][0]) * (v[1][1] - v[0][1])) / det;
        Some([1.0 - l1 - l2, l1, l2])
    }

    /// Active boundary points and barycentric weights at `p = (x, t)`.
    /// Several facets can share the maximal plane value (coplanar patches and
    /// facet edges); of those, the lowest-indexed facet whose projected
    /// triangle contains the query wins.
    pub fn contact_set(&self, x: f64, t: f64) -> Result<ContactSet> {
        let (_, value) = self.locate(x, t);
        let width = (self.x_hi - self.x_lo) / self.strips.len() as f64;
        let s = strip_of(
            x.clamp(self.x_lo, self.x_hi),
            self.x_lo,
            width,
            self.strips.len(),
        );
        let tie = 1e-12 * (1.0 + value.abs());
        for &k in &self.strips[s] {
            let k = k as usize;
            let p = self.planes[k];
            if (p[0] * x + p[1] * t + p[2] - value).abs() > tie {
                continue;
            }
            let Some(mut w) = self.barycentric(k, x, t) else {
                continue;
            };
            if w.iter().any(|wi| *wi < -1e-9) {
                continue;
            }
            for wi in &mut w {
                *wi = wi.max(0.0);
            }
            let sum: f64 = w.iter().sum();
            for wi in &mut w {
                *wi /= sum;
            }
            let f = self.facets[k];
            return Ok(ContactSet {
                facet: k,
                vertices: vec![self.points[f[0]], self.points[f[1]], self.points[f[2]]],
                weights: w.to_vec(),
            });
        }
        Err(Error::PointLocation(format!(
            "no facet contains ({}, {}); nearest value {}",
            x, t, value
        )))
    }

    /// Serialize points and facets as JSON.
    pub fn write_json(&self, w: &mut impl std::io::Write) -> Result<()> {
        #[derive(Serialize)]
        struct HullJson<'a> {
            points: &'a [[f64; 3]],
            facets: &'a [[usize; 3]],
        }
        let doc = HullJson {
            points: &self.points,
            facets: &self.facets,
        };
        serde_json::to_writer(&mut *w, &doc)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        writeln!(w)?;
        Ok(())
    }
}

/// Envelope values at `queries` through the linear-programming route:
/// minimize the convex combination of boundary values whose locations
/// average to the query. Works in any space-time dimension.
pub fn solve_envelope_lp(b: &BoundarySamples, queries: &[Vec<f64>]) -> Result<Vec<f64>> {
    let d = b.points.first().map(|p| p.len()).unwrap_or(0);
    if d == 0 || b.points.is_empty() {
        return Err(Error::Degenerate("no boundary samples".into()));
    }
    let m = b.points.len();
    let mut a = vec![vec![0.0f64; m]; d + 1];
    for (j, p) in b.points.iter().enumerate() {
        for (i, &coord) in p.iter().enumerate() {
            a[i][j] = coord;
        }
        a[d][j] = 1.0;
    }
    let mut out = Vec::with_capacity(queries.len());
    for q in queries {
        if q.len() != d {
            return Err(Error::ArityMismatch(format!(
                "query dimension {} does not match samples ({})",
                q.len(),
                d
            )));
        }
        let mut rhs = q.clone();
        rhs.push(1.0);
        let (value, _weights) = simplex::solve_min(&a, &rhs, &b.values)?;
        out.push(value);
    }
    Ok(out)
}

/// The explicit convex minorant and Lipschitz majorant of the envelope.
/// The lower field is `max(phi0 - C t, phi1 - C (1 - t), phi0 + phi1)`,
/// convex and matching the boundary data once `C` majorizes `sup |phi0 - phi1|`;
/// the upper field is the linear interpolation `t phi1 + (1 - t) phi0`.
#[derive(Debug, Clone)]
pub struct Barrier {
    pub c: f64,
    phi0: ScalarField,
    phi1: ScalarField,
}

impl Barrier {
    pub fn lower(&self, x: f64, t: f64) -> f64 {
        let p0 = self.phi0.eval_space(x);
        let p1 = self.phi1.eval_space(x);
        (p0 - self.c * t).max(p1 - self.c * (1.0 - t)).max(p0 + p1)
    }

    pub fn upper(&self, x: f64, t: f64) -> f64 {
        t * self.phi1.eval_space(x) + (1.0 - t) * self.phi0.eval_space(x)
    }
}

const BARRIER_SUP_SAMPLES: usize = 4097;

/// Build the barrier with `C = sup |phi0 - phi1| + 1`, the supremum taken
/// over a dense sample of the closed domain.
pub fn barrier(phi0: &ScalarField, phi1: &ScalarField, dom: &SpaceDomain) -> Result<Barrier> {
    let (a, b) = dom.as_interval()?;
    let mut sup = 0.0f64;
    for k in 0..BARRIER_SUP_SAMPLES {
        let x = a + (b - a) * (k as f64) / ((BARRIER_SUP_SAMPLES - 1) as f64);
        sup = sup.max((phi0.eval_space(x) - phi1.eval_space(x)).abs());
    }
    Ok(Barrier {
        c: sup + 1.0,
        phi0: phi0.clone(),
        phi1: phi1.clone(),
    })
}

/// Convenience: assemble, hull-solve and sample the envelope on the grid.
pub fn solve_envelope_on_grid(
    phi0: &ScalarField,
    phi1: &ScalarField,
    dom: &SpaceDomain,
    grid: &SpaceTimeGrid,
) -> Result<(HullEnvelope, GridField)> {
    let samples = assemble_boundary(phi0, phi1, dom, grid)?;
    let env = solve_envelope_hull(&samples)?;
    let field = env.sample(grid.clone())?;
    Ok((env, field))
}
