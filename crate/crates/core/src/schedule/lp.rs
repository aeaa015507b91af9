//! Dense two-phase simplex for small and medium linear programs.
//!
//! Solves `min c^T x` subject to `A_ub x <= b_ub` and `lo <= x <= hi`.
//! Pricing is Dantzig's most-negative reduced cost, switching to Bland's
//! lowest-index rule after a run of degenerate pivots so cycling cannot
//! happen. Ratio-test ties go to the lowest basic variable index.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("problem is infeasible")]
    Infeasible,
    #[error("problem is unbounded")]
    Unbounded,
    #[error("iteration limit reached")]
    IterationLimit,
    #[error("malformed problem: {0}")]
    Malformed(String),
}

/// Variable bounds: finite lower bound, optional upper bound.
pub type Bound = (f64, Option<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    rows: usize,
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    /// Pivot on (`row`, `col`); row `self.rows` is the objective row.
    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.at(row, col);
        let prow_start = row * w;
        for v in &mut self.data[prow_start..prow_start + w] {
            *v /= p;
        }
        let nz: Vec<usize> = (0..w).filter(|&j| self.data[prow_start + j] != 0.0).collect();
        let prow: Vec<f64> = nz.iter().map(|&j| self.data[prow_start + j]).collect();
        for r in 0..=self.rows {
            if r == row {
                continue;
            }
            let f = self.data[r * w + col];
            if f == 0.0 {
                continue;
            }
            let base = r * w;
            for (&j, &v) in nz.iter().zip(&prow) {
                self.data[base + j] -= f * v;
            }
            self.data[base + col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Run simplex iterations on the current objective row. Columns flagged
    /// in `barred` never enter.
    fn optimize(&mut self, barred: &[bool], max_iter: usize) -> Result<(), LpError> {
        let obj = self.rows;
        let rhs = self.rhs_col();
        let mut degenerate = 0usize;
        for _ in 0..max_iter {
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut enter = None;
            let mut best = -COST_TOL;
            for j in (0..rhs).filter(|&j| !barred[j]) {
                let d = self.at(obj, j);
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(col) = enter else { return Ok(()) };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, col);
                if a > PIVOT_TOL {
                    let ratio = self.at(r, rhs).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-12 || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr]) {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((row, ratio)) = leave else { return Err(LpError::Unbounded) };
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, col);
        }
        Err(LpError::IterationLimit)
    }
}

/// Solve `min c^T x` s.t. `a_ub x <= b_ub`, `bounds[j].0 <= x_j <= bounds[j].1`.
pub fn lp_solve(c: &[f64], a_ub: &[Vec<f64>], b_ub: &[f64], bounds: &[Bound]) -> Result<LpSolution, LpError> {
    let n = c.len();
    if bounds.len() != n {
        return Err(LpError::Malformed(format!("{} bounds for {n} variables", bounds.len())));
    }
    if a_ub.len() != b_ub.len() || a_ub.iter().any(|r| r.len() != n) {
        return Err(LpError::Malformed("constraint matrix shape mismatch".into()));
    }
    for (j, &(lo, hi)) in bounds.iter().enumerate() {
        if !lo.is_finite() || hi.is_some_and(|h| h < lo) {
            return Err(LpError::Malformed(format!("bad bounds on variable {j}")));
        }
    }

    // shift x = lo + y, y >= 0; finite upper bounds become rows
    let mut rows: Vec<(Vec<(usize, f64)>, f64)> = Vec::with_capacity(a_ub.len() + n);
    for (row, &b) in a_ub.iter().zip(b_ub) {
        let shift: f64 = row.iter().zip(bounds).map(|(a, (lo, _))| a * lo).sum();
        let entries = row.iter().enumerate().filter(|(_, a)| **a != 0.0).map(|(j, &a)| (j, a)).collect();
        rows.push((entries, b - shift));
    }
    for (j, &(lo, hi)) in bounds.iter().enumerate() {
        if let Some(h) = hi {
            rows.push((vec![(j, 1.0)], h - lo));
        }
    }
    let offset: f64 = c.iter().zip(bounds).map(|(cj, (lo, _))| cj * lo).sum();

    let y = solve_standard(c, &rows)?;
    let x: Vec<f64> = y.iter().zip(bounds).map(|(v, (lo, _))| v + lo).collect();
    let objective = c.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() + offset;
    Ok(LpSolution { x, objective })
}

/// `min c^T y` s.t. sparse rows `sum a_j y_j <= b`, `y >= 0`.
pub(crate) fn solve_standard(c: &[f64], rows: &[(Vec<(usize, f64)>, f64)]) -> Result<Vec<f64>, LpError> {
    let n = c.len();
    let m = rows.len();
    let negative: Vec<usize> = (0..m).filter(|&i| rows[i].1 < 0.0).collect();
    let n_art = negative.len();
    let width = n + m + n_art + 1;
    let rhs = width - 1;
    let mut t = Tableau { rows: m, width, data: vec![0.0; (m + 1) * width], basis: vec![0; m] };

    let mut art = 0;
    for (i, (entries, b)) in rows.iter().enumerate() {
        let sign = if *b < 0.0 { -1.0 } else { 1.0 };
        for &(j, a) in entries {
            t.data[i * width + j] += sign * a;
        }
        t.data[i * width + n + i] = sign;
        t.data[i * width + rhs] = sign * b;
        if *b < 0.0 {
            let col = n + m + art;
            t.data[i * width + col] = 1.0;
            t.basis[i] = col;
            art += 1;
        } else {
            t.basis[i] = n + i;
        }
    }
    let max_iter = 50 * (m + n) + 1000;

    if n_art > 0 {
        // phase 1: minimise the artificial sum, priced out against the basis
        let obj = m * width;
        for &i in &negative {
            for j in 0..width {
                t.data[obj + j] -= t.data[i * width + j];
            }
        }
        for a in 0..n_art {
            t.data[obj + n + m + a] = 0.0;
        }
        let barred = vec![false; width - 1];
        t.optimize(&barred, max_iter)?;
        let infeas = -t.at(m, rhs);
        let scale = 1.0 + rows.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
        if infeas > 1e-9 * scale {
            return Err(LpError::Infeasible);
        }
        // push any artificial still basic (at zero) out of the basis
        for r in 0..m {
            if t.basis[r] >= n + m {
                if let Some(j) = (0..n + m).find(|&j| t.at(r, j).abs() > PIVOT_TOL) {
                    t.pivot(r, j);
                }
            }
        }
    }

    // phase 2 objective row: reduced costs c_j - c_B B^-1 A_j
    let obj = m * width;
    for v in &mut t.data[obj..obj + width] {
        *v = 0.0;
    }
    t.data[obj..obj + n].copy_from_slice(c);
    for r in 0..m {
        let b = t.basis[r];
        if b < n && c[b] != 0.0 {
            let cb = c[b];
            for j in 0..width {
                t.data[obj + j] -= cb * t.data[r * width + j];
            }
        }
    }
    let mut barred = vec![false; width - 1];
    for flag in &mut barred[n + m..] {
        *flag = true;
    }
    t.optimize(&barred, max_iter)?;

    let mut y = vec![0.0; n];
    for r in 0..m {
        let b = t.basis[r];
        if b < n {
            y[b] = t.at(r, rhs).max(0.0);
        }
    }
    Ok(y)
}
