//! Incremental 3d convex hull (beneath-beyond).
//!
//! Small point sets (a few thousand lifted boundary samples), so the simple
//! O(n * f) insertion without conflict lists is plenty. Facets are oriented
//! outward against an interior reference point; horizon edges are found by
//! counting edge multiplicities over the visible set.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

type P3 = [f64; 3];

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: P3) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone)]
struct Facet {
    verts: [usize; 3],
    /// Unit outward normal.
    normal: P3,
    /// Plane offset: normal . p = offset for p on the facet.
    offset: f64,
    alive: bool,
}

impl Facet {
    fn new(verts: [usize; 3], pts: &[P3], interior: P3) -> Option<Facet> {
        let [a, b, c] = verts;
        let mut n = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
        let len = norm(n);
        if len == 0.0 {
            return None;
        }
        n = [n[0] / len, n[1] / len, n[2] / len];
        let mut verts = verts;
        let mut offset = dot(n, pts[a]);
        if dot(n, interior) > offset {
            n = [-n[0], -n[1], -n[2]];
            offset = -offset;
            verts.swap(1, 2);
        }
        Some(Facet {
            verts,
            normal: n,
            offset,
            alive: true,
        })
    }

    fn dist(&self, p: P3) -> f64 {
        dot(self.normal, p) - self.offset
    }
}

/// An outward-oriented triangulated convex hull.
#[derive(Debug, Clone)]
pub struct Hull3 {
    /// Vertex index triples, counterclockwise seen from outside.
    pub facets: Vec<[usize; 3]>,
    /// Unit outward normal per facet.
    pub normals: Vec<P3>,
    /// Plane offsets per facet.
    pub offsets: Vec<f64>,
}

/// Build the convex hull of `pts`. Points interior to the hull (or within
/// `eps` of a facet plane) do not create facets. Errors if all points are
/// affinely dependent.
pub fn convex_hull_3d(pts: &[P3]) -> Result<Hull3> {
    if pts.len() < 4 {
        return Err(Error::Degenerate(format!(
            "need at least 4 points, got {}",
            pts.len()
        )));
    }
    let scale = bbox_diameter(pts);
    if scale == 0.0 {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let eps = 1e-10 * scale;

    let (i0, i1, i2, i3) = initial_simplex(pts, eps)?;
    let interior = centroid(&[pts[i0], pts[i1], pts[i2], pts[i3]]);

    let mut facets: Vec<Facet> = Vec::new();
    for verts in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        facets.push(
            Facet::new(verts, pts, interior)
                .ok_or_else(|| Error::Degenerate("flat initial simplex".into()))?,
        );
    }

    let seed = [i0, i1, i2, i3];
    for p in 0..pts.len() {
        if seed.contains(&p) {
            continue;
        }
        insert_point(p, pts, &mut facets, interior, eps);
    }

    let mut out = Hull3 {
        facets: Vec::new(),
        normals: Vec::new(),
        offsets: Vec::new(),
    };
    for f in facets.into_iter().filter(|f| f.alive) {
        out.facets.push(f.verts);
        out.normals.push(f.normal);
        out.offsets.push(f.offset);
    }
    Ok(out)
}

fn insert_point(p: usize, pts: &[P3], facets: &mut Vec<Facet>, interior: P3, eps: f64) {
    let visible: Vec<usize> = facets
        .iter()
        .enumerate()
        .filter(|(_, f)| f.alive && f.dist(pts[p]) > eps)
        .map(|(k, _)| k)
        .collect();
    if visible.is_empty() {
        return;
    }

    // Horizon edges appear exactly once over the visible facets. A BTreeMap
    // keeps the traversal order independent of hashing, so hull construction
    // is reproducible run to run.
    let mut edges: BTreeMap<(usize, usize), (usize, usize, u8)> = BTreeMap::new();
    for &k in &visible {
        let [a, b, c] = facets[k].verts;
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let key = (u.min(v), u.max(v));
            edges
                .entry(key)
                .and_modify(|e| e.2 += 1)
                .or_insert((u, v, 1));
        }
    }
    for &k in &visible {
        facets[k].alive = false;
    }
    for (_, (u, v, count)) in edges {
        if count != 1 {
            continue;
        }
        if let Some(f) = Facet::new([u, v, p], pts, interior) {
            facets.push(f);
        }
    }
}

fn bbox_diameter(pts: &[P3]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in pts {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2) + (hi[2] - lo[2]).powi(2)).sqrt()
}

fn centroid(ps: &[P3]) -> P3 {
    let mut c = [0.0; 3];
    for p in ps {
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    for v in &mut c {
        *v /= ps.len() as f64;
    }
    c
}

fn initial_simplex(pts: &[P3], eps: f64) -> Result<(usize, usize, usize, usize)> {
    // farthest pair seeded from the lexicographic extremes
    let i0 = (0..pts.len())
        .min_by(|&a, &b| pts[a].partial_cmp(&pts[b]).unwrap())
        .unwrap();
    let i1 = (0..pts.len())
        .max_by(|&a, &b| {
            norm(sub(pts[a], pts[i0]))
                .partial_cmp(&norm(sub(pts[b], pts[i0])))
                .unwrap()
        })
        .unwrap();
    if norm(sub(pts[i1], pts[i0])) <= eps {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let d01 = sub(pts[i1], pts[i0]);
    let i2 = (0..pts.len())
        .max_by(|&a, &b| {
            norm(cross(d01, sub(pts[a], pts[i0])))
                .partial_cmp(&norm(cross(d01, sub(pts[b], pts[i0]))))
                .unwrap()
        })
        .unwrap();
    if norm(cross(d01, sub(pts[i2], pts[i0]))) <= eps * norm(d01) {
        return Err(Error::Degenerate("all points collinear".into()));
    }
    let n = cross(d01, sub(pts[i2], pts[i0]));
    let i3 = (0..pts.len())
        .max_by(|&a, &b| {
            dot(n, sub(pts[a], pts[i0]))
                .abs()
                .partial_cmp(&dot(n, sub(pts[b], pts[i0])).abs())
                .unwrap()
        })
        .unwrap();
    if dot(n, sub(pts[i3], pts[i0])).abs() <= eps * norm(n) {
        return Err(Error::Degenerate("all points coplanar".into()));
    }
    Ok((i0, i1, i2, i3))
}
