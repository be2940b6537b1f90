//! Numerical verification of the structural claims on grid functions:
//! Monge-Ampere degeneracy, convexity, barrier sandwiches, Lipschitz and
//! C^{1,1} bounds, quadratic growth, gluing, blow-up probes, and the path
//! energy. Checks are pure functions over immutable grids; reports assemble
//! results in the declared order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envelope::Barrier;
use crate::error::{Error, Result};
use crate::expr::{ScalarField, Var};
use crate::grid::GridField;
use crate::tolerances::{SANDWICH_SLACK_ABS, SANDWICH_SLACK_FACTOR};

/// Region selector for checks that exclude the singular corner points
/// `boundary x {0,1}` of the space-time domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionSpec {
    /// Exclude everything within `radius` of one of the four corners.
    CornerExclusion { radius: f64 },
    /// Explicit box in `(x, t)`.
    Box { x0: f64, x1: f64, t0: f64, t1: f64 },
}

impl RegionSpec {
    pub fn corner_exclusion(radius: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::InvalidDomain("exclusion radius must be positive".into()));
        }
        Ok(RegionSpec::CornerExclusion { radius })
    }

    pub fn contains(&self, x_range: (f64, f64), x: f64, t: f64) -> bool {
        match *self {
            RegionSpec::CornerExclusion { radius } => {
                let (a, b) = x_range;
                let corners = [(a, 0.0), (b, 0.0), (a, 1.0), (b, 1.0)];
                corners
                    .iter()
                    .all(|&(cx, ct)| ((x - cx).powi(2) + (t - ct).powi(2)).sqrt() >= radius)
            }
            RegionSpec::Box { x0, x1, t0, t1 } => x0 <= x && x <= x1 && t0 <= t && t <= t1,
        }
    }
}

/// Centered second-difference Hessian at an interior node, diagonal stencil
/// for the mixed entry.
pub fn discrete_hessian(u: &GridField, i: usize, j: usize) -> [[f64; 2]; 2] {
    let g = u.grid();
    let (hx, ht) = (g.hx(), g.ht());
    let uxx = (u.value(i + 1, j) + u.value(i - 1, j) - 2.0 * u.value(i, j)) / (hx * hx);
    let utt = (u.value(i, j + 1) + u.value(i, j - 1) - 2.0 * u.value(i, j)) / (ht * ht);
    let uxt = (u.value(i + 1, j + 1) + u.value(i - 1, j - 1)
        - u.value(i + 1, j - 1)
        - u.value(i - 1, j + 1))
        / (4.0 * hx * ht);
    [[uxx, uxt], [uxt, utt]]
}

fn eigen_bounds(h: [[f64; 2]; 2]) -> (f64, f64) {
    let mean = 0.5 * (h[0][0] + h[1][1]);
    let disc = (0.25 * (h[0][0] - h[1][1]).powi(2) + h[0][1] * h[0][1]).sqrt();
    (mean - disc, mean + disc)
}

/// Discrete Monge-Ampere determinant over interior nodes: the raw and
/// normalized maxima, plus the mean of the normalized values. For piecewise
/// solutions the max concentrates on the contact creases (where the
/// solution is C^{1,1} but not C^2, an O(h)-width set of nodes), so the
/// mean is the discrete analogue of the vanishing Monge-Ampere measure and
/// is what the degeneracy verdict uses; smooth solutions drive the max to
/// zero as well.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MaResidual {
    pub max_raw: f64,
    pub max_normalized: f64,
    pub mean_normalized: f64,
    pub worst_point: [f64; 2],
}

impl MaResidual {
    /// Degeneracy verdict: mean normalized determinant under the calibrated
    /// O(h) budget.
    pub fn pass(&self, h: f64) -> bool {
        self.mean_normalized <= crate::tolerances::MA_MEAN_FACTOR * h
    }
}

pub fn ma_residual(u: &GridField) -> MaResidual {
    ma_residual_in(u, None)
}

pub fn ma_residual_in(u: &GridField, region: Option<&RegionSpec>) -> MaResidual {
    let g = u.grid();
    let mut out = MaResidual {
        max_raw: 0.0,
        max_normalized: 0.0,
        mean_normalized: 0.0,
        worst_point: [f64::NAN, f64::NAN],
    };
    let mut sum = 0.0;
    let mut count = 0usize;
    for j in 1..g.nt() - 1 {
        for i in 1..g.nx() - 1 {
            let (x, t) = (g.x(i), g.t(j));
            if let Some(r) = region {
                if !r.contains(g.x_range(), x, t) {
                    continue;
                }
            }
            let h = discrete_hessian(u, i, j);
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            let norm2 = h[0][0] * h[0][0] + 2.0 * h[0][1] * h[0][1] + h[1][1] * h[1][1];
            let normalized = det.abs() / (1.0 + norm2);
            sum += normalized;
            count += 1;
            out.max_raw = out.max_raw.max(det.abs());
            if normalized > out.max_normalized {
                out.max_normalized = normalized;
                out.worst_point = [x, t];
            }
        }
    }
    if count > 0 {
        out.mean_normalized = sum / count as f64;
    }
    out
}

/// Discrete convexity of a grid function. The verdict rests on directional
/// second differences, which are nonnegative for every convex function on
/// every grid (midpoint convexity), so the only slack needed is rounding.
/// The minimum eigenvalue of the assembled 2x2 second-difference Hessian is
/// reported as a diagnostic: its mixed-stencil entry is polluted by O(1)
/// at nodes whose stencil straddles a Hessian jump, and near the corner
/// points it diverges, so it cannot serve as the pass criterion for the
/// piecewise-smooth solutions this crate certifies.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Convexity {
    /// Minimum `(u(p+d) + u(p-d) - 2 u(p)) / |d|^2` over nodes and the
    /// axis/diagonal directions.
    pub min_directional: f64,
    /// Rounding allowance on the directional minimum.
    pub tolerance: f64,
    pub min_eigenvalue: f64,
    pub worst_point: [f64; 2],
}

impl Convexity {
    pub fn pass(&self) -> bool {
        self.min_directional >= -self.tolerance
    }
}

pub fn convexity_check(u: &GridField) -> Convexity {
    convexity_check_in(u, None)
}

pub fn convexity_check_in(u: &GridField, region: Option<&RegionSpec>) -> Convexity {
    let g = u.grid();
    let (hx, ht) = (g.hx(), g.ht());
    let dirs: [(isize, isize, f64); 4] = [
        (1, 0, hx * hx),
        (0, 1, ht * ht),
        (1, 1, hx * hx + ht * ht),
        (1, -1, hx * hx + ht * ht),
    ];
    let umax = u.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let d2_min = (hx * hx).min(ht * ht);
    let tolerance = 1e-12 + 64.0 * f64::EPSILON * umax / d2_min;
    let mut out = Convexity {
        min_directional: f64::INFINITY,
        tolerance,
        min_eigenvalue: f64::INFINITY,
        worst_point: [f64::NAN, f64::NAN],
    };
    for j in 1..g.nt() - 1 {
        for i in 1..g.nx() - 1 {
            let (x, t) = (g.x(i), g.t(j));
            if let Some(r) = region {
                if !r.contains(g.x_range(), x, t) {
                    continue;
                }
            }
            for &(di, dj, d2) in &dirs {
                let ip = (i as isize + di) as usize;
                let im = (i as isize - di) as usize;
                let jp = (j as isize + dj) as usize;
                let jm = (j as isize - dj) as usize;
                let q = (u.value(ip, jp) + u.value(im, jm) - 2.0 * u.value(i, j)) / d2;
                if q < out.min_directional {
                    out.min_directional = q;
                    out.worst_point = [x, t];
                }
            }
            let (lo, _) = eigen_bounds(discrete_hessian(u, i, j));
            out.min_eigenvalue = out.min_eigenvalue.min(lo);
        }
    }
    out
}

/// Barrier sandwich verdict: lower barrier <= u <= linear interpolation at
/// every node, within `1e-9 + 5 h` of slack.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sandwich {
    pub pass: bool,
    pub max_lower_violation: f64,
    pub max_upper_violation: f64,
    pub slack: f64,
    pub worst_point: [f64; 2],
}

pub fn barrier_check(u: &GridField, b: &Barrier) -> Sandwich {
    let g = u.grid();
    let h = g.hx().max(g.ht());
    let slack = SANDWICH_SLACK_ABS + SANDWICH_SLACK_FACTOR * h;
    let mut out = Sandwich {
        pass: true,
        max_lower_violation: 0.0,
        max_upper_violation: 0.0,
        slack,
        worst_point: [f64::NAN, f64::NAN],
    };
    for j in 0..g.nt() {
        for i in 0..g.nx() {
            let (x, t) = (g.x(i), g.t(j));
            let v = u.value(i, j);
            let low = b.lower(x, t) - v;
            let up = v - b.upper(x, t);
            if low > out.max_lower_violation {
                out.max_lower_violation = low;
                out.worst_point = [x, t];
            }
            if up > out.max_upper_violation {
                out.max_upper_violation = up;
                out.worst_point = [x, t];
            }
        }
    }
    out.pass = out.max_lower_violation <= slack && out.max_upper_violation <= slack;
    out
}

/// Largest first-difference quotient over grid edges: the discrete global
/// Lipschitz constant.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Lipschitz {
    pub value: f64,
    pub worst_point: [f64; 2],
}

pub fn lipschitz_constant(u: &GridField) -> Lipschitz {
    let g = u.grid();
    let mut out = Lipschitz {
        value: 0.0,
        worst_point: [f64::NAN, f64::NAN],
    };
    for j in 0..g.nt() {
        for i in 0..g.nx() {
            if i + 1 < g.nx() {
                let q = (u.value(i + 1, j) - u.value(i, j)).abs() / g.hx();
                if q > out.value {
                    out.value = q;
                    out.worst_point = [g.x(i), g.t(j)];
                }
            }
            if j + 1 < g.nt() {
                let q = (u.value(i, j + 1) - u.value(i, j)).abs() / g.ht();
                if q > out.value {
                    out.value = q;
                    out.worst_point = [g.x(i), g.t(j)];
                }
            }
        }
    }
    out
}

/// Supremum of second-difference quotients `|u(p+d) + u(p-d) - 2u(p)| / |d|^2`
/// over region nodes and axis/diagonal directions: the measured C^{1,1}
/// seminorm, and the constant of the quadratic-growth inequality.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Seminorm {
    pub value: f64,
    pub worst_point: [f64; 2],
    pub nodes: usize,
}

pub fn c11_seminorm(u: &GridField, region: &RegionSpec) -> Result<Seminorm> {
    seminorm_over(u, |x, t| region.contains(u.grid().x_range(), x, t))
}

fn seminorm_over(u: &GridField, keep: impl Fn(f64, f64) -> bool) -> Result<Seminorm> {
    let g = u.grid();
    let (hx, ht) = (g.hx(), g.ht());
    let dirs: [(isize, isize, f64); 4] = [
        (1, 0, hx * hx),
        (0, 1, ht * ht),
        (1, 1, hx * hx + ht * ht),
        (1, -1, hx * hx + ht * ht),
    ];
    let mut out = Seminorm {
        value: 0.0,
        worst_point: [f64::NAN, f64::NAN],
        nodes: 0,
    };
    for j in 1..g.nt() - 1 {
        for i in 1..g.nx() - 1 {
            let (x, t) = (g.x(i), g.t(j));
            if !keep(x, t) {
                continue;
            }
            out.nodes += 1;
            for &(di, dj, d2) in &dirs {
                let ip = (i as isize + di) as usize;
                let im = (i as isize - di) as usize;
                let jp = (j as isize + dj) as usize;
                let jm = (j as isize - dj) as usize;
                let q = (u.value(ip, jp) + u.value(im, jm) - 2.0 * u.value(i, j)).abs() / d2;
                if q > out.value {
                    out.value = q;
                    out.worst_point = [x, t];
                }
            }
        }
    }
    if out.nodes == 0 {
        return Err(Error::InvalidDomain("region contains no interior grid nodes".into()));
    }
    Ok(out)
}

/// Seminorms over shrinking annuli around a corner: for a C^{1,1}-breaking
/// solution the values scale like 1/r, for a regular one they stay flat.
pub fn blowup_probe(u: &GridField, corner: [f64; 2], radii: &[f64]) -> Result<Vec<f64>> {
    let g = u.grid();
    let h = g.hx().max(g.ht());
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidDomain("radii must be strictly decreasing".into()));
    }
    let smallest = *radii.last().ok_or_else(|| {
        Error::InvalidDomain("at least one radius required".into())
    })?;
    if smallest < 4.0 * h {
        return Err(Error::InvalidGrid(format!(
            "smallest radius {} under 4h = {}",
            smallest,
            4.0 * h
        )));
    }
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let s = seminorm_over(u, |x, t| {
            let d = ((x - corner[0]).powi(2) + (t - corner[1]).powi(2)).sqrt();
            r <= d && d <= 2.0 * r
        })
        .map_err(|_| Error::InvalidGrid(format!("annulus [{}, {}] holds no grid nodes", r, 2.0 * r)))?;
        out.push(s.value);
    }
    Ok(out)
}

/// Verdict of the two-piece gluing test: values and symbolic gradients of
/// both pieces must agree along the interface samples. Symmetric in the
/// pieces by construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GluingResult {
    pub pass: bool,
    pub max_value_gap: f64,
    pub max_gradient_gap: f64,
    pub tol: f64,
}

pub fn gluing_check(
    piece_a: &ScalarField,
    piece_b: &ScalarField,
    interface: &[(f64, f64)],
    tol: f64,
) -> GluingResult {
    let ax = piece_a.differentiate(Var::X);
    let at = piece_a.differentiate(Var::T);
    let bx = piece_b.differentiate(Var::X);
    let bt = piece_b.differentiate(Var::T);
    let mut value_gap = 0.0f64;
    let mut grad_gap = 0.0f64;
    for &(x, t) in interface {
        value_gap = value_gap.max((piece_a.eval(x, t) - piece_b.eval(x, t)).abs());
        grad_gap = grad_gap.max((ax.eval(x, t) - bx.eval(x, t)).abs());
        grad_gap = grad_gap.max((at.eval(x, t) - bt.eval(x, t)).abs());
    }
    GluingResult {
        pass: value_gap <= tol && grad_gap <= tol,
        max_value_gap: value_gap,
        max_gradient_gap: grad_gap,
        tol,
    }
}

/// Trapezoid-rule value of `1/2 \int_0^1 \int_U (du/dt)^2 det(D^2_x metric)`:
/// the path energy whose minimizers are the geodesics. The metric weight is
/// the space Hessian of `metric` on the same grid (pass the path itself for
/// the geodesic energy).
pub fn energy(path: &GridField, metric: &GridField) -> Result<f64> {
    let g = path.grid();
    if metric.grid() != g {
        return Err(Error::InvalidGrid("path and metric grids differ".into()));
    }
    let (nx, nt) = (g.nx(), g.nt());
    let (hx, ht) = (g.hx(), g.ht());
    let ut = |i: usize, j: usize| -> f64 {
        if j == 0 {
            (path.value(i, 1) - path.value(i, 0)) / ht
        } else if j == nt - 1 {
            (path.value(i, nt - 1) - path.value(i, nt - 2)) / ht
        } else {
            (path.value(i, j + 1) - path.value(i, j - 1)) / (2.0 * ht)
        }
    };
    let uxx = |i: usize, j: usize| -> f64 {
        let ii = i.clamp(1, nx - 2);
        (metric.value(ii + 1, j) + metric.value(ii - 1, j) - 2.0 * metric.value(ii, j)) / (hx * hx)
    };
    let mut total = 0.0;
    for j in 0..nt {
        let wt = if j == 0 || j == nt - 1 { 0.5 } else { 1.0 };
        for i in 0..nx {
            let wx = if i == 0 || i == nx - 1 { 0.5 } else { 1.0 };
            let dt = ut(i, j);
            total += wt * wx * dt * dt * uxx(i, j);
        }
    }
    Ok(0.5 * total * hx * ht)
}

/// Measured constant of the quadratic-growth inequality over random node
/// pairs in the region: `|u(y,t) - u(x,s) - (y-x, t-s) . D_h u(x,s)|`
/// divided by the squared distance. The seed is recorded for reproducibility.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Growth {
    pub constant: f64,
    pub pairs: usize,
    pub seed: u64,
}

pub fn quadratic_growth_check(
    u: &GridField,
    region: &RegionSpec,
    pairs: usize,
    seed: u64,
) -> Result<Growth> {
    let g = u.grid();
    let mut nodes = Vec::new();
    for j in 1..g.nt() - 1 {
        for i in 1..g.nx() - 1 {
            if region.contains(g.x_range(), g.x(i), g.t(j)) {
                nodes.push((i, j));
            }
        }
    }
    if nodes.len() < 2 {
        return Err(Error::InvalidDomain("region holds fewer than two interior nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut constant = 0.0f64;
    let mut used = 0usize;
    while used < pairs {
        let (i0, j0) = nodes[rng.gen_range(0..nodes.len())];
        let (i1, j1) = nodes[rng.gen_range(0..nodes.len())];
        if (i0, j0) == (i1, j1) {
            continue;
        }
        used += 1;
        let (x0, t0) = (g.x(i0), g.t(j0));
        let (x1, t1) = (g.x(i1), g.t(j1));
        let ux = (u.value(i0 + 1, j0) - u.value(i0 - 1, j0)) / (2.0 * g.hx());
        let ut = (u.value(i0, j0 + 1) - u.value(i0, j0 - 1)) / (2.0 * g.ht());
        let lin = u.value(i0, j0) + (x1 - x0) * ux + (t1 - t0) * ut;
        let dist2 = (x1 - x0).powi(2) + (t1 - t0).powi(2);
        constant = constant.max((u.value(i1, j1) - lin).abs() / dist2);
    }
    Ok(Growth {
        constant,
        pairs: used,
        seed,
    })
}

/// One named check in a verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    pub worst_point: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Grid metadata and named check results, assembled in a fixed order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub grid: GridMeta,
    pub checks: Vec<CheckResult>,
    pub seed: u64,
    pub provenance: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridMeta {
    pub nx: usize,
    pub nt: usize,
}

impl VerificationReport {
    pub fn new(u: &GridField, seed: u64) -> Self {
        VerificationReport {
            grid: GridMeta {
                nx: u.grid().nx(),
                nt: u.grid().nt(),
            },
            checks: Vec::new(),
            seed,
            provenance: u.provenance().as_str().to_string(),
        }
    }

    pub fn push(
        &mut self,
        name: &str,
        pass: bool,
        measured: f64,
        tolerance: f64,
        worst: Option<[f64; 2]>,
    ) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            measured: Some(measured),
            tolerance: Some(tolerance),
            worst_point: worst,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn write_json(&self, w: &mut impl std::io::Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut *w, self)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        writeln!(w)?;
        Ok(())
    }
}
