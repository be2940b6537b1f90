//! Strictly convex space domains and their boundary samplers.

use crate::error::{Error, Result};

/// The space domain `U`. The expression grammar only provides a single space
/// variable, so potentials are one-dimensional and solver paths operate on
/// intervals; the ball and polytope variants carry the geometry for the
/// dimension-agnostic linear-programming envelope, whose boundary data is
/// supplied as raw samples.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceDomain {
    Interval { a: f64, b: f64 },
    Ball { center: Vec<f64>, radius: f64 },
    Polytope { vertices: Vec<Vec<f64>> },
}

impl SpaceDomain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain(format!(
                "interval requires finite a < b, got ({}, {})",
                a, b
            )));
        }
        Ok(SpaceDomain::Interval { a, b })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidDomain(
                "ball requires a nonempty center and positive radius".into(),
            ));
        }
        Ok(SpaceDomain::Ball { center, radius })
    }

    /// A polytope from its vertex list; in two dimensions the vertices must
    /// describe a convex polygon in order.
    pub fn polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain(
                "polytope requires at least 3 vertices".into(),
            ));
        }
        let d = vertices[0].len();
        if vertices.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidDomain(
                "polytope vertices must share a dimension".into(),
            ));
        }
        if d == 2 && !is_convex_polygon(&vertices) {
            return Err(Error::InvalidDomain(
                "polytope vertex list is not a convex polygon".into(),
            ));
        }
        Ok(SpaceDomain::Polytope { vertices })
    }

    pub fn dim(&self) -> usize {
        match self {
            SpaceDomain::Interval { .. } => 1,
            SpaceDomain::Ball { center, .. } => center.len(),
            SpaceDomain::Polytope { vertices } => vertices[0].len(),
        }
    }

    /// Interval endpoints; errors on higher-dimensional domains.
    pub fn as_interval(&self) -> Result<(f64, f64)> {
        match self {
            SpaceDomain::Interval { a, b } => Ok((*a, *b)),
            _ => Err(Error::ArityMismatch(format!(
                "operation requires an interval domain, got a {}-dimensional domain",
                self.dim()
            ))),
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            SpaceDomain::Interval { a, b } => p.len() == 1 && *a <= p[0] && p[0] <= *b,
            SpaceDomain::Ball { center, radius } => {
                p.len() == center.len() && dist(p, center) <= *radius
            }
            SpaceDomain::Polytope { vertices } => {
                if p.len() != 2 {
                    return false;
                }
                let n = vertices.len();
                (0..n).all(|i| {
                    let a = &vertices[i];
                    let b = &vertices[(i + 1) % n];
                    cross(b[0] - a[0], b[1] - a[1], p[0] - a[0], p[1] - a[1]) >= -1e-12
                })
            }
        }
    }

    /// Ordered boundary samples. For an interval these are the two endpoints;
    /// for a 2d ball or polygon, `count` points walking the boundary.
    pub fn boundary_samples(&self, count: usize) -> Vec<Vec<f64>> {
        match self {
            SpaceDomain::Interval { a, b } => vec![vec![*a], vec![*b]],
            SpaceDomain::Ball { center, radius } => {
                assert_eq!(center.len(), 2, "boundary sampler implemented for 2d balls");
                (0..count)
                    .map(|k| {
                        let th = 2.0 * std::f64::consts::PI * (k as f64) / (count as f64);
                        vec![center[0] + radius * th.cos(), center[1] + radius * th.sin()]
                    })
                    .collect()
            }
            SpaceDomain::Polytope { vertices } => {
                let n = vertices.len();
                let per_edge = count.max(n) / n;
                let mut out = Vec::new();
                for i in 0..n {
                    let a = &vertices[i];
                    let b = &vertices[(i + 1) % n];
                    for k in 0..per_edge {
                        let s = k as f64 / per_edge as f64;
                        out.push(
                            a.iter()
                                .zip(b)
                                .map(|(ai, bi)| ai + s * (bi - ai))
                                .collect(),
                        );
                    }
                }
                out
            }
        }
    }
}

fn cross(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    ax * by - ay * bx
}

fn dist(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn is_convex_polygon(vertices: &[Vec<f64>]) -> bool {
    let n = vertices.len();
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let c = &vertices[(i + 2) % n];
        let cr = cross(b[0] - a[0], b[1] - a[1], c[0] - b[0], c[1] - b[1]);
        if cr.abs() > 1e-12 {
            if sign != 0.0 && cr.signum() != sign {
                return false;
            }
            sign = cr.signum();
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_requires_order() {
        assert!(SpaceDomain::interval(-1.0, 1.0).is_ok());
        assert!(SpaceDomain::interval(1.0, -1.0).is_err());
        assert!(SpaceDomain::interval(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn interval_boundary_is_endpoints() {
        let d = SpaceDomain::interval(-1.0, 1.0).unwrap();
        assert_eq!(d.boundary_samples(10), vec![vec![-1.0], vec![1.0]]);
    }

    #[test]
    fn polygon_convexity_enforced() {
        let square = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        assert!(SpaceDomain::polytope(square).is_ok());
        let dart = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![0.5, 0.5],
            vec![0.0, 2.0],
        ];
        assert!(SpaceDomain::polytope(dart).is_err());
    }

    #[test]
    fn ball_contains_center() {
        let d = SpaceDomain::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert!(d.contains(&[0.0, 0.0]));
        assert!(!d.contains(&[2.0, 0.0]));
    }
}
