//! Dense two-phase simplex for the envelope linear programs.
//!
//! The programs are tiny in the constraint dimension (space-time dimension
//! plus one equality for the weights) and wide in the variables (one weight
//! per boundary sample), so a dense tableau with Bland's rule is simple,
//! deterministic, and immune to cycling.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-8;

/// Solve min c.x subject to A x = b, x >= 0. Returns the optimal value and
/// the solution vector. `a` is row-major with `m` rows.
pub fn solve_min(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<(f64, Vec<f64>)> {
    let m = a.len();
    assert!(m > 0 && a.iter().all(|r| r.len() == c.len()) && b.len() == m);
    let n = c.len();

    // tableau: m rows of [A | I_artificial | b], then the objective row
    let width = n + m + 1;
    let mut t = vec![vec![0.0f64; width]; m];
    for (i, row) in a.iter().enumerate() {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            t[i][j] = flip * v;
        }
        t[i][n + i] = 1.0;
        t[i][width - 1] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: minimize the sum of artificials
    let mut cost1 = vec![0.0f64; width - 1];
    for j in n..n + m {
        cost1[j] = 1.0;
    }
    let obj1 = run_simplex(&mut t, &mut basis, &cost1, n + m)?;
    let scale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if obj1 > FEAS_TOL * scale {
        return Err(Error::Infeasible(format!(
            "phase-1 objective {:.3e}",
            obj1
        )));
    }
    // pivot artificials out of the basis where possible; rows where that is
    // impossible are redundant constraints and can stay with value zero
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > PIVOT_TOL) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    // phase 2: original costs, artificial columns frozen
    let mut cost2 = vec![0.0f64; width - 1];
    cost2[..n].copy_from_slice(c);
    let obj2 = run_simplex(&mut t, &mut basis, &cost2, n)?;

    let mut x = vec![0.0f64; n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width - 1];
        }
    }
    Ok((obj2, x))
}

/// Bland's rule simplex over columns `0..ncols`. Returns the objective value.
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    ncols: usize,
) -> Result<f64> {
    let m = t.len();
    let width = t[0].len();
    let max_iters = 50 * (ncols + m) + 1000;
    for _ in 0..max_iters {
        // reduced costs: c_j - c_B . B^{-1} A_j, computed from the tableau
        let mut entering = None;
        for j in 0..ncols {
            if basis.contains(&j) {
                continue;
            }
            let mut red = cost[j];
            for i in 0..m {
                red -= cost[basis[i]] * t[i][j];
            }
            if red < -PIVOT_TOL {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            let mut obj = 0.0;
            for i in 0..m {
                obj += cost[basis[i]] * t[i][width - 1];
            }
            return Ok(obj);
        };
        // ratio test, lowest basis index on ties (Bland)
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][j] > PIVOT_TOL {
                let ratio = t[i][width - 1] / t[i][j];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - PIVOT_TOL
                            || (ratio < lr + PIVOT_TOL && basis[i] < basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((i, _)) = leave else {
            return Err(Error::Infeasible("unbounded linear program".into()));
        };
        pivot(t, basis, i, j);
    }
    Err(Error::ConvergenceFailure(
        "simplex iteration limit".into(),
    ))
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let width = t[0].len();
    let piv = t[row][col];
    for v in &mut t[row] {
        *v /= piv;
    }
    for i in 0..t.len() {
        if i == row {
            continue;
        }
        let factor = t[i][col];
        if factor != 0.0 {
            for j in 0..width {
                t[i][j] -= factor * t[row][j];
            }
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_point_on_segment() {
        // min weights' cost hitting 0.25 on [0,1]: combination of endpoints
        let a = vec![vec![0.0, 1.0], vec![1.0, 1.0]];
        let b = vec![0.25, 1.0];
        let c = vec![0.0, 1.0];
        let (v, x) = solve_min(&a, &b, &c).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        assert!((x[0] - 0.75).abs() < 1e-12 && (x[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn picks_cheapest_vertex_combination() {
        // three candidate points on a line, query in the middle; the middle
        // point is expensive so the ends win
        let a = vec![vec![0.0, 0.5, 1.0], vec![1.0, 1.0, 1.0]];
        let b = vec![0.5, 1.0];
        let c = vec![0.0, 10.0, 0.0];
        let (v, x) = solve_min(&a, &b, &c).unwrap();
        assert!(v.abs() < 1e-12);
        assert!((x[0] - 0.5).abs() < 1e-10 && x[1].abs() < 1e-10 && (x[2] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn infeasible_detected() {
        // query outside the hull of the sample points
        let a = vec![vec![0.0, 1.0], vec![1.0, 1.0]];
        let b = vec![2.0, 1.0];
        let c = vec![0.0, 0.0];
        assert!(matches!(solve_min(&a, &b, &c), Err(Error::Infeasible(_))));
    }

    #[test]
    fn degenerate_ties_terminate() {
        // duplicated columns force degenerate pivots; Bland must terminate
        let a = vec![vec![0.0, 0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0, 1.0]];
        let b = vec![0.5, 1.0];
        let c = vec![1.0, 1.0, 3.0, 3.0];
        let (v, _) = solve_min(&a, &b, &c).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
    }
}
