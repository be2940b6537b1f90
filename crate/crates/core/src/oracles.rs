//! Closed-form piecewise solutions used as ground truth.
//!
//! Two explicit weak geodesics: a real one on `(-1, 1)` joining `2(x^2-1)`
//! to `x^2-1` in three regions, and a toric one in log coordinates on
//! `(-inf, 0)` joining the pullbacks of `2(|w|^2-1)` and `|w|^2-1` in two
//! regions. Values, gradients and Hessians are carried both as transcribed
//! formulas and as symbolic expressions, so re-differentiation doubles as a
//! typo detector for the transcription.

use crate::error::{Error, Result};
use crate::expr::ScalarField;
use crate::grid::{GridField, Provenance, SpaceTimeGrid};

/// A piecewise-defined closed-form solution: region classifier, per-region
/// symbolic values, and the interfaces where adjacent pieces glue.
pub struct PiecewiseSolution {
    pub pieces: Vec<ScalarField>,
    pub classify: fn(f64, f64) -> usize,
    /// Interface curves as `x(t)` between consecutive pieces.
    pub interfaces: Vec<fn(f64) -> f64>,
}

impl PiecewiseSolution {
    pub fn eval(&self, x: f64, t: f64) -> (f64, usize) {
        let r = (self.classify)(x, t);
        (self.pieces[r].eval(x, t), r)
    }
}

const LOG_SQRT2: f64 = std::f64::consts::LN_2 / 2.0;

fn classify3(x: f64, t: f64) -> usize {
    if t >= 1.0 {
        // continuous extension: the interfaces pinch into the corners
        return if x <= -1.0 {
            0
        } else if x >= 1.0 {
            2
        } else {
            1
        };
    }
    if (x + t) / (1.0 - t) < -0.5 {
        0
    } else if (x - t) / (1.0 - t) > 0.5 {
        2
    } else {
        1
    }
}

fn classify4(x: f64, t: f64) -> usize {
    if t >= 1.0 {
        return usize::from(x >= 0.0);
    }
    usize::from(x >= LOG_SQRT2 * t - LOG_SQRT2)
}

fn interface3_left(t: f64) -> f64 {
    -(1.0 + t) / 2.0
}

fn interface3_right(t: f64) -> f64 {
    (1.0 + t) / 2.0
}

fn interface4(t: f64) -> f64 {
    LOG_SQRT2 * t - LOG_SQRT2
}

/// The real example: three regions on `[-1,1] x [0,1]`.
pub fn example3_solution() -> PiecewiseSolution {
    let parse = |s: &str| ScalarField::parse(s).unwrap();
    PiecewiseSolution {
        pieces: vec![
            parse("2*(1-t)*(((x+t)/(1-t))^2-1)"),
            parse("2*x^2/(1+t)+t-2"),
            parse("2*(1-t)*(((x-t)/(1-t))^2-1)"),
        ],
        classify: classify3,
        interfaces: vec![interface3_left, interface3_right],
    }
}

/// The toric example in log coordinates: two regions on `(-inf, 0] x [0,1]`.
pub fn example4_solution() -> PiecewiseSolution {
    let parse = |s: &str| ScalarField::parse(s).unwrap();
    PiecewiseSolution {
        pieces: vec![
            parse("2*exp(2*x-log(2)*t)+t-2"),
            parse("2*(1-t)*(exp(2*x/(1-t))-1)"),
        ],
        classify: classify4,
        interfaces: vec![interface4],
    }
}

/// Value of the real example, with its 1-based region id.
pub fn example3(x: f64, t: f64) -> Result<(f64, u8)> {
    if !(-1.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidDomain(format!(
            "({}, {}) outside [-1,1] x [0,1]",
            x, t
        )));
    }
    if t == 1.0 {
        // continuous extension: every piece limits to x^2 - 1
        return Ok((x * x - 1.0, classify3(x, t) as u8 + 1));
    }
    let sol = example3_solution();
    let (v, r) = sol.eval(x, t);
    Ok((v, r as u8 + 1))
}

/// Transcribed Hessian of the real example together with the region id;
/// on an interface the region-1-side (left) matrix is returned with a flag.
#[derive(Debug, Clone, Copy)]
pub struct OracleHessian {
    pub matrix: [[f64; 2]; 2],
    pub region: u8,
    pub on_interface: bool,
}

/// Printed Hessian entries of the three pieces as symbolic fields, indexed
/// `[region][row][col]`.
pub fn example3_hessian_fields() -> [[[ScalarField; 2]; 2]; 3] {
    let p = |s: &str| ScalarField::parse(s).unwrap();
    [
        [
            [p("4/(1-t)"), p("4*(1+x)/(1-t)^2")],
            [p("4*(1+x)/(1-t)^2"), p("4*(1+x)^2/(1-t)^3")],
        ],
        [
            [p("4/(1+t)"), p("-4*x/(1+t)^2")],
            [p("-4*x/(1+t)^2"), p("4*x^2/(1+t)^3")],
        ],
        [
            [p("4/(1-t)"), p("4*(x-1)/(1-t)^2")],
            [p("4*(x-1)/(1-t)^2"), p("4*(x-1)^2/(1-t)^3")],
        ],
    ]
}

pub fn example3_hessian(x: f64, t: f64) -> Result<OracleHessian> {
    if !(-1.0..=1.0).contains(&x) || !(0.0..1.0).contains(&t) {
        return Err(Error::InvalidDomain(format!(
            "({}, {}) outside [-1,1] x [0,1)",
            x, t
        )));
    }
    let r = classify3(x, t);
    let fields = example3_hessian_fields();
    let m = [
        [fields[r][0][0].eval(x, t), fields[r][0][1].eval(x, t)],
        [fields[r][1][0].eval(x, t), fields[r][1][1].eval(x, t)],
    ];
    let on_interface = (x - interface3_left(t)).abs() < 1e-14
        || (x - interface3_right(t)).abs() < 1e-14;
    Ok(OracleHessian {
        matrix: m,
        region: r as u8 + 1,
        on_interface,
    })
}

/// Interface data of the real example: common value and the gradient pair of
/// the adjacent pieces as printed.
#[derive(Debug, Clone)]
pub struct InterfaceGradients {
    /// Value shared by both pieces along each interface: 3(t-1)/2.
    pub value: fn(f64) -> f64,
    /// Printed common gradient on the left interface.
    pub left_gradient: [f64; 2],
    /// Printed common gradient on the right interface.
    pub right_gradient: [f64; 2],
}

pub fn example3_interface_gradients() -> InterfaceGradients {
    InterfaceGradients {
        value: |t| 1.5 * (t - 1.0),
        left_gradient: [-2.0, 0.5],
        right_gradient: [2.0, 0.5],
    }
}

/// Value of the toric example in log coordinates, with its 1-based region id.
/// The domain is truncated on the left by the caller's grid.
pub fn example4(x: f64, t: f64) -> Result<(f64, u8)> {
    if x > 0.0 || !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidDomain(format!(
            "({}, {}) outside (-inf,0] x [0,1]",
            x, t
        )));
    }
    if t == 1.0 {
        return Ok(((2.0 * x).exp() - 1.0, classify4(x, t) as u8 + 1));
    }
    let sol = example4_solution();
    let (v, r) = sol.eval(x, t);
    Ok((v, r as u8 + 1))
}

/// Sample the real example over a grid, returning values and region ids.
pub fn sample_example3(grid: &SpaceTimeGrid) -> Result<(GridField, Vec<u8>)> {
    let mut regions = Vec::with_capacity(grid.len());
    for j in 0..grid.nt() {
        for i in 0..grid.nx() {
            regions.push(example3(grid.x(i), grid.t(j))?.1);
        }
    }
    let field = GridField::sample(grid.clone(), Provenance::Oracle, |x, t| {
        example3(x, t).unwrap().0
    })?;
    Ok((field, regions))
}

/// Sample the toric example over a truncated log grid.
pub fn sample_example4(grid: &SpaceTimeGrid) -> Result<(GridField, Vec<u8>)> {
    let mut regions = Vec::with_capacity(grid.len());
    for j in 0..grid.nt() {
        for i in 0..grid.nx() {
            regions.push(example4(grid.x(i), grid.t(j))?.1);
        }
    }
    let field = GridField::sample(grid.clone(), Provenance::Oracle, |x, t| {
        example4(x, t).unwrap().0
    })?;
    Ok((field, regions))
}

/// Interface line of the toric example: x = log(sqrt 2) t - log(sqrt 2).
pub fn example4_interface(t: f64) -> f64 {
    interface4(t)
}

/// Interface lines of the real example.
pub fn example3_interfaces() -> [fn(f64) -> f64; 2] {
    [interface3_left, interface3_right]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Var;
    use rand::{Rng, SeedableRng};

    #[test]
    fn boundary_conditions() {
        // u(x, 0) = 2(x^2 - 1)
        for k in 0..=10 {
            let x = -1.0 + 0.2 * k as f64;
            let (v, _) = example3(x, 0.0).unwrap();
            assert!((v - 2.0 * (x * x - 1.0)).abs() < 1e-14, "x = {}", x);
            let (v1, _) = example3(x, 1.0).unwrap();
            assert!((v1 - (x * x - 1.0)).abs() < 1e-14);
        }
        // u(+-1, t) = 0
        for k in 0..=10 {
            let t = 0.1 * k as f64;
            assert!(example3(-1.0, t).unwrap().0.abs() < 1e-14);
            assert!(example3(1.0, t).unwrap().0.abs() < 1e-14);
        }
        assert_eq!(example3(0.0, 0.0).unwrap().0, -2.0);
    }

    #[test]
    fn region_classification() {
        assert_eq!(example3(0.0, 0.5).unwrap().1, 2);
        assert_eq!(example3(-0.9, 0.5).unwrap().1, 1);
        assert_eq!(example3(0.9, 0.5).unwrap().1, 3);
    }

    #[test]
    fn middle_region_value() {
        let (v, r) = example3(0.0, 0.5).unwrap();
        assert_eq!(r, 2);
        assert!((v - (-1.5)).abs() < 1e-15);
    }

    #[test]
    fn interface_point_value() {
        // (x, t) = (-1/2, 0) lies on the left interface; both formulas give -3/2
        let (v, _) = example3(-0.5, 0.0).unwrap();
        assert!((v - (-1.5)).abs() < 1e-15);
        let g = example3_interface_gradients();
        assert_eq!((g.value)(0.0), -1.5);
    }

    #[test]
    fn out_of_domain_rejected() {
        assert!(example3(1.5, 0.5).is_err());
        assert!(example3(0.0, -0.1).is_err());
        assert!(example4(0.5, 0.5).is_err());
    }

    #[test]
    fn hessian_entries_and_determinants() {
        // region 2 entry (1,1) extends to 2 at t = 1
        let h = example3_hessian(0.0, 1.0 - 1e-9).unwrap();
        assert_eq!(h.region, 2);
        assert!((h.matrix[0][0] - 2.0).abs() < 1e-7);
        // region 1 determinant vanishes identically
        let h1 = example3_hessian(-0.9, 0.5).unwrap();
        assert_eq!(h1.region, 1);
        let det = h1.matrix[0][0] * h1.matrix[1][1] - h1.matrix[0][1] * h1.matrix[1][0];
        assert!(det.abs() < 1e-12);
        // region 1 entry (1,1) diverges like 4/(1-t) toward the corner
        let near = example3_hessian(-0.995, 0.98).unwrap();
        assert_eq!(near.region, 1);
        assert!((near.matrix[0][0] - 4.0 / 0.02).abs() < 1e-9);
    }

    #[test]
    fn hessian_flags_interface_points() {
        let t = 0.25;
        let h = example3_hessian(-(1.0 + t) / 2.0, t).unwrap();
        assert!(h.on_interface);
    }

    #[test]
    fn symbolic_rederivation_matches_printed_hessians() {
        let sol = example3_solution();
        let printed = example3_hessian_fields();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut counted = [0usize; 3];
        while counted.iter().any(|&c| c < 200) {
            let x = rng.gen_range(-1.0..1.0);
            let t = rng.gen_range(0.0..0.95);
            let r = classify3(x, t);
            counted[r] += 1;
            let u = &sol.pieces[r];
            let sym = [
                [
                    u.differentiate(Var::X).differentiate(Var::X).eval(x, t),
                    u.differentiate(Var::X).differentiate(Var::T).eval(x, t),
                ],
                [
                    u.differentiate(Var::T).differentiate(Var::X).eval(x, t),
                    u.differentiate(Var::T).differentiate(Var::T).eval(x, t),
                ],
            ];
            for row in 0..2 {
                for col in 0..2 {
                    let p = printed[r][row][col].eval(x, t);
                    assert!(
                        (sym[row][col] - p).abs() <= 1e-10 * (1.0 + p.abs()),
                        "entry ({},{}) region {} at ({}, {}): {} vs {}",
                        row,
                        col,
                        r + 1,
                        x,
                        t,
                        sym[row][col],
                        p
                    );
                }
            }
        }
    }

    #[test]
    fn interface_gradients_match_printed_pairs() {
        let sol = example3_solution();
        let info = example3_interface_gradients();
        for k in 0..50 {
            let t = 0.98 * k as f64 / 49.0;
            let xl = interface3_left(t);
            for piece in [&sol.pieces[0], &sol.pieces[1]] {
                let gx = piece.differentiate(Var::X).eval(xl, t);
                let gt = piece.differentiate(Var::T).eval(xl, t);
                assert!((gx - info.left_gradient[0]).abs() < 1e-12);
                assert!((gt - info.left_gradient[1]).abs() < 1e-12);
                assert!((piece.eval(xl, t) - (info.value)(t)).abs() < 1e-12);
            }
            let xr = interface3_right(t);
            for piece in [&sol.pieces[1], &sol.pieces[2]] {
                let gx = piece.differentiate(Var::X).eval(xr, t);
                let gt = piece.differentiate(Var::T).eval(xr, t);
                assert!((gx - info.right_gradient[0]).abs() < 1e-12);
                assert!((gt - info.right_gradient[1]).abs() < 1e-12);
                assert!((piece.eval(xr, t) - (info.value)(t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn toric_example_values() {
        // on the interface the value is t - 1
        for k in 0..=10 {
            let t = 0.1 * k as f64 * 0.99;
            let x = interface4(t);
            let (v, _) = example4(x, t).unwrap();
            assert!((v - (t - 1.0)).abs() < 1e-12, "t = {}", t);
        }
        let (v, _) = example4(interface4(0.5), 0.5).unwrap();
        assert!((v - (-0.5)).abs() < 1e-12);
        // at t = 0, right of the interface: pullback of 2(|w|^2 - 1)
        let (v0, r0) = example4(-0.2, 0.0).unwrap();
        assert_eq!(r0, 2);
        assert!((v0 - 2.0 * ((-0.4f64).exp() - 1.0)).abs() < 1e-14);
        // deep region 1
        let (v1, r1) = example4(-4.0, 0.5).unwrap();
        assert_eq!(r1, 1);
        let expected = 2.0 * (-8.0 - 0.5 * std::f64::consts::LN_2).exp() + 0.5 - 2.0;
        assert!((v1 - expected).abs() < 1e-15);
    }

    #[test]
    fn oracle_values_are_convex_along_lines() {
        // coarse midpoint-convexity sweep over both oracles
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let x = rng.gen_range(-0.95..0.95);
            let t = rng.gen_range(0.05..0.95);
            let dx = rng.gen_range(-0.04..0.04);
            let dt = rng.gen_range(-0.04..0.04);
            if x + dx < -1.0 || x + dx > 1.0 || x - dx < -1.0 || x - dx > 1.0 {
                continue;
            }
            if !(0.0..=1.0).contains(&(t + dt)) || !(0.0..=1.0).contains(&(t - dt)) {
                continue;
            }
            let mid = example3(x, t).unwrap().0;
            let plus = example3(x + dx, t + dt).unwrap().0;
            let minus = example3(x - dx, t - dt).unwrap().0;
            assert!(plus + minus - 2.0 * mid >= -1e-12);
        }
        for _ in 0..500 {
            let x = rng.gen_range(-3.9..-0.05);
            let t = rng.gen_range(0.05..0.95);
            let dx = rng.gen_range(-0.04..0.04f64);
            let dt = rng.gen_range(-0.04..0.04f64);
            if x + dx.abs() > 0.0 || !(0.0..=1.0).contains(&(t + dt)) || !(0.0..=1.0).contains(&(t - dt)) {
                continue;
            }
            let mid = example4(x, t).unwrap().0;
            let plus = example4(x + dx, t + dt).unwrap().0;
            let minus = example4(x - dx, t - dt).unwrap().0;
            assert!(plus + minus - 2.0 * mid >= -1e-12);
        }
    }

    #[test]
    fn printed_hessian_determinants_vanish() {
        let fields = example3_hessian_fields();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let t: f64 = rng.gen_range(0.0..0.98);
            let r = classify3(x, t);
            let h = &fields[r];
            let m = [
                [h[0][0].eval(x, t), h[0][1].eval(x, t)],
                [h[1][0].eval(x, t), h[1][1].eval(x, t)],
            ];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let norm2 = m[0][0] * m[0][0] + 2.0 * m[0][1] * m[0][1] + m[1][1] * m[1][1];
            assert!(det.abs() <= 1e-10 * (1.0 + norm2));
        }
    }

    #[test]
    fn sampling_matches_pointwise_eval() {
        let grid = SpaceTimeGrid::over_interval(-1.0, 1.0, 17, 9).unwrap();
        let (field, regions) = sample_example3(&grid).unwrap();
        assert_eq!(regions.len(), field.values().len());
        assert!((field.value(8, 4) - example3(0.0, 0.5).unwrap().0).abs() < 1e-15);
    }
}
