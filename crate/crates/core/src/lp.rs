//! Dense two-phase simplex for the one problem shape the rest of the crate
//! needs: minimize `<c, w>` over free `w` subject to `<a_i, w> >= b_i`.
//!
//! The solver certifies all three exits. OPTIMAL returns a feasible point,
//! UNBOUNDED returns a recession direction, INFEASIBLE is the phase-one
//! verdict. Every certificate is re-checked against the original rows before
//! it is returned, so a status you get out of [`solve`] is one the caller can
//! trust without repeating the algebra.

use thiserror::Error;

/// Feasibility tolerance: how much constraint violation a returned witness
/// may carry, relative to the row's scale.
pub const EPS_FEAS: f64 = 1e-7;

/// Optimal values above this count as strictly positive. Used by the
/// extreme-ray test to separate "interior" from "numerically zero".
pub const TAU_POS: f64 = 1e-7;

/// Entries smaller than this never serve as pivots.
const PIVOT_TOL: f64 = 1e-9;

/// `minimize <objective, w>  subject to  <a, w> >= b  for (a, b) in constraints`,
/// with `w` unrestricted in sign.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    /// Each pair `(a, b)` encodes the row `<a, w> >= b`.
    pub constraints: Vec<(Vec<f64>, f64)>,
}

impl LinearProgram {
    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.dim();
        for (i, (a, _)) in self.constraints.iter().enumerate() {
            if a.len() != n {
                return Err(LpError::DimensionMismatch { index: i, expected: n, got: a.len() });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// `w` satisfies every constraint within [`EPS_FEAS`] and attains `value`.
    Optimal { value: f64, w: Vec<f64> },
    /// `ray` satisfies `<a_i, ray> >= 0` for every row and `<c, ray> < 0`, so
    /// sliding any feasible point along it decreases the objective forever.
    Unbounded { ray: Vec<f64> },
    Infeasible,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("constraint {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("numerical failure in simplex: {0}")]
    NumericalFailure(String),
}

/// Smallest slack `<a_i, w> - b_i` over all rows; negative means infeasible
/// at that magnitude. Exposed so callers and tests can audit witnesses.
pub fn min_constraint_slack(lp: &LinearProgram, w: &[f64]) -> f64 {
    lp.constraints
        .iter()
        .map(|(a, b)| dot(a, w) - b)
        .fold(f64::INFINITY, f64::min)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

enum LoopExit {
    Converged,
    /// Entering column with no blocking row; phase two only.
    UnboundedAt(usize),
}

struct Tableau {
    /// Constraint rows, then the phase-two cost row, then the phase-one cost
    /// row. Last column is the right-hand side.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_cols: usize,
    n_rows: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = 1.0 / self.rows[row][col];
        for x in self.rows[row].iter_mut() {
            *x *= inv;
        }
        self.rows[row][col] = 1.0;
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col];
            if factor == 0.0 {
                continue;
            }
            for c in 0..=self.n_cols {
                self.rows[r][c] -= factor * self.rows[row][c];
            }
            self.rows[r][col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Bland's rule: enter the lowest-index improving column, leave by
    /// minimum ratio with ties broken by lowest basis index. No cycling.
    fn run(&mut self, obj_row: usize, cols: usize, max_iters: usize) -> Result<LoopExit, LpError> {
        for _ in 0..max_iters {
            let entering = (0..cols).find(|&j| self.rows[obj_row][j] < -PIVOT_TOL);
            let entering = match entering {
                Some(j) => j,
                None => return Ok(LoopExit::Converged),
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.n_rows {
                let coef = self.rows[i][entering];
                if coef > PIVOT_TOL {
                    let ratio = self.rows[i][self.n_cols] / coef;
                    let better = match leaving {
                        None => true,
                        Some((best, best_ratio)) => {
                            ratio < best_ratio - PIVOT_TOL
                                || (ratio < best_ratio + PIVOT_TOL
                                    && self.basis[i] < self.basis[best])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, entering),
                None => return Ok(LoopExit::UnboundedAt(entering)),
            }
        }
        Err(LpError::NumericalFailure("pivot iteration limit exceeded".into()))
    }
}

/// Two-phase simplex on the standard-form split `w = u - v`, `u, v >= 0`,
/// with one surplus variable per row.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let n = lp.dim();
    let m = lp.constraints.len();

    if m == 0 {
        // No constraints: either the objective is identically zero or any
        // descent direction escapes.
        return if lp.objective.iter().all(|&c| c == 0.0) {
            Ok(LpOutcome::Optimal { value: 0.0, w: vec![0.0; n] })
        } else {
            let ray: Vec<f64> = lp.objective.iter().map(|&c| -c).collect();
            checked_unbounded(lp, ray)
        };
    }

    // Columns: u (n), v (n), surplus (m), artificial (m), rhs.
    let structural = 2 * n + m;
    let total = structural + m;
    let mut tab = Tableau {
        rows: vec![vec![0.0; total + 1]; m + 2],
        basis: (0..m).map(|i| structural + i).collect(),
        n_cols: total,
        n_rows: m,
    };

    for (i, (a, b)) in lp.constraints.iter().enumerate() {
        // Flip rows with negative rhs so the artificial start is feasible.
        let sign = if *b < 0.0 { -1.0 } else { 1.0 };
        for (j, &aj) in a.iter().enumerate() {
            tab.rows[i][j] = sign * aj;
            tab.rows[i][n + j] = -sign * aj;
        }
        tab.rows[i][2 * n + i] = -sign;
        tab.rows[i][structural + i] = 1.0;
        tab.rows[i][total] = sign * b;
    }

    // Phase-two reduced costs: the artificial basis has zero cost there.
    for j in 0..n {
        tab.rows[m][j] = lp.objective[j];
        tab.rows[m][n + j] = -lp.objective[j];
    }
    // Phase-one reduced costs: unit cost on artificials, eliminated against
    // the starting basis. rhs entry tracks minus the phase-one objective.
    for i in 0..m {
        let row = tab.rows[i].clone();
        for (c, x) in tab.rows[m + 1].iter_mut().zip(row) {
            *c -= x;
        }
        tab.rows[m + 1][structural + i] = 0.0;
    }

    let max_iters = 1000 * (m + n + 10);
    match tab.run(m + 1, structural, max_iters)? {
        LoopExit::Converged => {}
        LoopExit::UnboundedAt(_) => {
            return Err(LpError::NumericalFailure("phase one unbounded".into()));
        }
    }

    let scale = 1.0 + lp.constraints.iter().map(|(_, b)| b.abs()).fold(0.0, f64::max);
    if -tab.rows[m + 1][total] > EPS_FEAS * scale {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive leftover artificials out of the basis; rows that will not take a
    // structural pivot are redundant and dropped.
    let mut drop_rows = Vec::new();
    for i in 0..m {
        if tab.basis[i] >= structural {
            match (0..structural).find(|&j| tab.rows[i][j].abs() > PIVOT_TOL) {
                Some(j) => tab.pivot(i, j),
                None => drop_rows.push(i),
            }
        }
    }
    if !drop_rows.is_empty() {
        for &i in drop_rows.iter().rev() {
            tab.rows.remove(i);
            tab.basis.remove(i);
        }
        tab.n_rows -= drop_rows.len();
    }

    match tab.run(tab.rows.len() - 2, structural, max_iters)? {
        LoopExit::Converged => {
            let mut w = vec![0.0; n];
            for (i, &var) in tab.basis.iter().enumerate() {
                let x = tab.rows[i][total];
                if var < n {
                    w[var] += x;
                } else if var < 2 * n {
                    w[var - n] -= x;
                }
            }
            let value = dot(&lp.objective, &w);
            let slack = min_constraint_slack(lp, &w);
            if slack < -EPS_FEAS * witness_scale(lp, &w) {
                return Err(LpError::NumericalFailure(format!(
                    "optimal witness violates a constraint by {:.3e}",
                    -slack
                )));
            }
            Ok(LpOutcome::Optimal { value, w })
        }
        LoopExit::UnboundedAt(col) => {
            // The entering column's edge is a recession direction of the
            // standard-form cone; fold u - v back into w.
            let mut x = vec![0.0; total];
            x[col] = 1.0;
            for (i, &var) in tab.basis.iter().enumerate() {
                x[var] = -tab.rows[i][col];
            }
            let mut ray: Vec<f64> = (0..n).map(|j| x[j] - x[n + j]).collect();
            let norm = ray.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if norm > 0.0 {
                for v in ray.iter_mut() {
                    *v /= norm;
                }
            }
            checked_unbounded(lp, ray)
        }
    }
}

fn witness_scale(lp: &LinearProgram, w: &[f64]) -> f64 {
    let wmax = w.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let amax = lp
        .constraints
        .iter()
        .flat_map(|(a, _)| a.iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    let bmax = lp.constraints.iter().map(|(_, b)| b.abs()).fold(0.0, f64::max);
    1.0_f64.max(bmax).max(wmax * amax)
}

fn checked_unbounded(lp: &LinearProgram, ray: Vec<f64>) -> Result<LpOutcome, LpError> {
    let descent = dot(&lp.objective, &ray);
    let recession = lp
        .constraints
        .iter()
        .map(|(a, _)| dot(a, &ray))
        .fold(f64::INFINITY, f64::min);
    if descent >= 0.0 || recession < -EPS_FEAS * witness_scale(lp, &ray) {
        return Err(LpError::NumericalFailure(
            "unbounded certificate fails recession check".into(),
        ));
    }
    Ok(LpOutcome::Unbounded { ray })
}
