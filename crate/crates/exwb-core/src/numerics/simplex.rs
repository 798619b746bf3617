//! Two-phase revised simplex with Bland's rule.
//!
//! Dense, deterministic, desk-scale. Phase 1 starts from a full artificial
//! basis; a strictly positive phase-1 optimum yields a Farkas certificate.
//! The basis inverse is maintained by eta updates and refactorized
//! periodically.

use nalgebra::DMatrix;
use thiserror::Error;

use super::LP_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintOp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub op: ConstraintOp,
    pub rhs: f64,
}

/// A linear program over variables with per-variable bounds.
///
/// Bounds default to `[0, +inf)`. A lower bound of `f64::NEG_INFINITY` makes
/// the variable free (it is split internally).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub maximize: bool,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn new(maximize: bool, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            maximize,
            objective,
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn push(&mut self, coeffs: Vec<f64>, op: ConstraintOp, rhs: f64) {
        assert_eq!(coeffs.len(), self.objective.len(), "constraint dimension mismatch");
        self.constraints.push(Constraint { coeffs, op, rhs });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value in the original sense (only meaningful at `Optimal`).
    pub value: f64,
    /// Primal point in the original variable space.
    pub x: Vec<f64>,
    /// Dual multipliers for the original constraint rows (at `Optimal`).
    pub dual: Vec<f64>,
    /// Dual objective value mapped to the original sense (at `Optimal`).
    pub dual_value: f64,
    /// Farkas certificate on infeasibility: `y` over the original rows with
    /// `y·rhs > 0`, `yᵀA ≤ 0` componentwise over the columns and `y_i ≤ 0`
    /// on `≤`-rows / `y_i ≥ 0` on `≥`-rows. Only produced when every variable
    /// has bounds `[0, +inf)`.
    pub farkas: Option<Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("constraint row {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch { row: usize, got: usize, expected: usize },
    #[error("non-finite coefficient encountered")]
    NonFinite,
    #[error("simplex iteration limit reached")]
    IterationLimit,
}

struct StandardForm {
    a: DMatrix<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    /// column -> (original var, sign) for primal recovery; None for slacks.
    col_map: Vec<Option<(usize, f64)>>,
    /// per original variable: additive shift (its finite lower bound).
    shift: Vec<f64>,
    /// row -> (original row index, sign) or None for bound rows.
    row_map: Vec<Option<(usize, f64)>>,
    n_structural: usize,
    obj_offset: f64,
    plain_nonneg: bool,
}

fn build_standard_form(lp: &LinearProgram) -> Result<StandardForm, LpError> {
    let n = lp.objective.len();
    for (r, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(LpError::DimensionMismatch { row: r, got: c.coeffs.len(), expected: n });
        }
    }
    if lp
        .objective
        .iter()
        .chain(lp.constraints.iter().flat_map(|c| c.coeffs.iter().chain(std::iter::once(&c.rhs))))
        .any(|v| !v.is_finite())
    {
        return Err(LpError::NonFinite);
    }

    let plain_nonneg = lp.bounds.iter().all(|&(lo, hi)| lo == 0.0 && hi == f64::INFINITY);

    // Columns for the structural variables.
    let mut col_map: Vec<Option<(usize, f64)>> = Vec::new();
    let mut shift = vec![0.0; n];
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        assert!(lo <= hi, "empty bound interval for variable {j}");
        if lo == f64::NEG_INFINITY {
            assert!(hi == f64::INFINITY, "half-free variables not supported; use a row");
            col_map.push(Some((j, 1.0)));
            col_map.push(Some((j, -1.0)));
        } else {
            shift[j] = lo;
            col_map.push(Some((j, 1.0)));
        }
    }
    let n_structural = col_map.len();

    // Rows: original constraints with rhs adjusted by shifts, then upper-bound rows.
    struct Row {
        coeffs: Vec<f64>,
        op: ConstraintOp,
        rhs: f64,
        map: Option<(usize, f64)>,
    }
    let mut rows: Vec<Row> = Vec::new();
    for (r, c) in lp.constraints.iter().enumerate() {
        let mut coeffs = vec![0.0; n_structural];
        for (k, m) in col_map.iter().enumerate() {
            let (j, s) = m.unwrap();
            coeffs[k] = c.coeffs[j] * s;
        }
        let rhs = c.rhs - c.coeffs.iter().zip(&shift).map(|(a, s)| a * s).sum::<f64>();
        rows.push(Row { coeffs, op: c.op, rhs, map: Some((r, 1.0)) });
    }
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if hi != f64::INFINITY && lo != f64::NEG_INFINITY {
            let mut coeffs = vec![0.0; n_structural];
            let k = col_map.iter().position(|m| *m == Some((j, 1.0))).unwrap();
            coeffs[k] = 1.0;
            rows.push(Row { coeffs, op: ConstraintOp::Le, rhs: hi - lo, map: None });
        }
    }

    // Slack / surplus columns, then b >= 0 normalization.
    let m = rows.len();
    let mut extra = 0usize;
    for row in &rows {
        if row.op != ConstraintOp::Eq {
            extra += 1;
        }
    }
    let total = n_structural + extra;
    let mut a = DMatrix::<f64>::zeros(m, total);
    let mut b = vec![0.0; m];
    let mut row_map = Vec::with_capacity(m);
    let mut next_slack = n_structural;
    for (i, row) in rows.iter().enumerate() {
        for (k, &v) in row.coeffs.iter().enumerate() {
            a[(i, k)] = v;
        }
        match row.op {
            ConstraintOp::Le => {
                a[(i, next_slack)] = 1.0;
                next_slack += 1;
            }
            ConstraintOp::Ge => {
                a[(i, next_slack)] = -1.0;
                next_slack += 1;
            }
            ConstraintOp::Eq => {}
        }
        b[i] = row.rhs;
        let mut sign = 1.0;
        if b[i] < 0.0 {
            sign = -1.0;
            b[i] = -b[i];
            for k in 0..total {
                a[(i, k)] = -a[(i, k)];
            }
        }
        row_map.push(row.map.map(|(r, s)| (r, s * sign)));
    }

    let mut c_std = vec![0.0; total];
    let sense = if lp.maximize { -1.0 } else { 1.0 };
    for (k, mopt) in col_map.iter().enumerate() {
        let (j, s) = mopt.unwrap();
        c_std[k] = sense * lp.objective[j] * s;
    }
    let obj_offset: f64 = lp.objective.iter().zip(&shift).map(|(c, s)| c * s).sum();

    let mut cm = col_map;
    cm.resize(total, None);
    Ok(StandardForm {
        a,
        b,
        c: c_std,
        col_map: cm,
        shift,
        row_map,
        n_structural,
        obj_offset,
        plain_nonneg,
    })
}

/// Simplex state over `min c·x, Ax = b, x ≥ 0` with a known basis.
struct Tableau {
    a: DMatrix<f64>,
    b: Vec<f64>,
    m: usize,
    basis: Vec<usize>,
    binv: DMatrix<f64>,
    pivots_since_refactor: usize,
}

impl Tableau {
    fn xb(&self) -> Vec<f64> {
        let mut xb = vec![0.0; self.m];
        for i in 0..self.m {
            let mut v = 0.0;
            for k in 0..self.m {
                v += self.binv[(i, k)] * self.b[k];
            }
            xb[i] = v;
        }
        xb
    }

    fn duals(&self, c: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for k in 0..self.m {
            let mut v = 0.0;
            for i in 0..self.m {
                v += c[self.basis[i]] * self.binv[(i, k)];
            }
            y[k] = v;
        }
        y
    }

    fn refactorize(&mut self) {
        let mut bm = DMatrix::<f64>::zeros(self.m, self.m);
        for (i, &j) in self.basis.iter().enumerate() {
            for r in 0..self.m {
                bm[(r, i)] = self.a[(r, j)];
            }
        }
        self.binv = bm.try_inverse().expect("basis matrix must be invertible");
        self.pivots_since_refactor = 0;
    }

    fn pivot(&mut self, row: usize, col: usize, d: &[f64]) {
        self.basis[row] = col;
        let dr = d[row];
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = d[i] / dr;
            if f != 0.0 {
                for k in 0..self.m {
                    let br = self.binv[(row, k)];
                    self.binv[(i, k)] -= f * br;
                }
            }
        }
        for k in 0..self.m {
            self.binv[(row, k)] /= dr;
        }
        self.pivots_since_refactor += 1;
        if self.pivots_since_refactor >= 64 {
            self.refactorize();
        }
    }

    /// Bland's rule iteration over the allowed columns. Returns Ok(true) on
    /// optimality, Ok(false) if an unbounded ray was detected.
    fn run(&mut self, c: &[f64], allowed: &[bool], max_iters: usize) -> Result<bool, LpError> {
        let ncols = self.a.ncols();
        for _ in 0..max_iters {
            let y = self.duals(c);
            // Entering: smallest index with reduced cost < -tol.
            let mut entering = None;
            for j in 0..ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut yaj = 0.0;
                for i in 0..self.m {
                    yaj += y[i] * self.a[(i, j)];
                }
                if c[j] - yaj < -LP_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return Ok(true) };
            // Direction d = B^{-1} a_j.
            let mut d = vec![0.0; self.m];
            for i in 0..self.m {
                let mut v = 0.0;
                for k in 0..self.m {
                    v += self.binv[(i, k)] * self.a[(k, j)];
                }
                d[i] = v;
            }
            let xb = self.xb();
            // Ratio test; ties by smallest basic variable index (Bland).
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                if d[i] > LP_TOL {
                    let ratio = xb[i].max(0.0) / d[i];
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - LP_TOL
                                || (ratio < lr + LP_TOL && self.basis[i] < self.basis[li])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = leave else { return Ok(false) };
            self.pivot(r, j, &d);
        }
        Err(LpError::IterationLimit)
    }
}

/// Solve a linear program. See [`LinearProgram`] for conventions.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpResult, LpError> {
    let sf = build_standard_form(lp)?;
    let m = sf.a.nrows();
    let n_cols = sf.a.ncols();
    let n_orig = lp.objective.len();
    let sense = if lp.maximize { -1.0 } else { 1.0 };

    if m == 0 {
        // Only bounds; optimum at a bound vertex.
        let mut x = vec![0.0; n_orig];
        let mut value = 0.0;
        for j in 0..n_orig {
            let (lo, hi) = lp.bounds[j];
            let c = lp.objective[j];
            let want_big = (c > 0.0) == lp.maximize;
            let v = if c == 0.0 {
                lo.max(0.0).min(hi)
            } else if want_big {
                if hi == f64::INFINITY {
                    return Ok(LpResult {
                        status: LpStatus::Unbounded,
                        value: 0.0,
                        x: vec![],
                        dual: vec![],
                        dual_value: 0.0,
                        farkas: None,
                    });
                } else {
                    hi
                }
            } else {
                lo
            };
            x[j] = v;
            value += c * v;
        }
        return Ok(LpResult {
            status: LpStatus::Optimal,
            value,
            x,
            dual: vec![],
            dual_value: value,
            farkas: None,
        });
    }

    // Phase 1: full artificial basis.
    let total = n_cols + m;
    let mut a1 = DMatrix::<f64>::zeros(m, total);
    a1.view_mut((0, 0), (m, n_cols)).copy_from(&sf.a);
    for i in 0..m {
        a1[(i, n_cols + i)] = 1.0;
    }
    let mut c1 = vec![0.0; total];
    for j in n_cols..total {
        c1[j] = 1.0;
    }
    let mut t = Tableau {
        a: a1,
        b: sf.b.clone(),
        m,
        basis: (n_cols..total).collect(),
        binv: DMatrix::identity(m, m),
        pivots_since_refactor: 0,
    };
    let allowed1 = vec![true; total];
    let max_iters = 50_000 + 200 * (total + m);
    let optimal = t.run(&c1, &allowed1, max_iters)?;
    debug_assert!(optimal, "phase 1 is always bounded");
    let xb = t.xb();
    let phase1: f64 = t.basis.iter().zip(&xb).filter(|(j, _)| **j >= n_cols).map(|(_, v)| *v).sum();
    if phase1 > 1e-7 {
        // Infeasible; map the phase-1 duals back to the original rows.
        let y = t.duals(&c1);
        let farkas = if sf.plain_nonneg {
            let mut f = vec![0.0; lp.constraints.len()];
            for (i, mp) in sf.row_map.iter().enumerate() {
                if let Some((r, s)) = mp {
                    f[*r] = y[i] * s;
                }
            }
            Some(f)
        } else {
            None
        };
        return Ok(LpResult {
            status: LpStatus::Infeasible,
            value: 0.0,
            x: vec![],
            dual: vec![],
            dual_value: 0.0,
            farkas,
        });
    }

    // Drive remaining artificials out of the basis where possible.
    for i in 0..m {
        if t.basis[i] >= n_cols {
            let mut found = None;
            for j in 0..n_cols {
                if t.basis.contains(&j) {
                    continue;
                }
                let mut v = 0.0;
                for k in 0..m {
                    v += t.binv[(i, k)] * t.a[(k, j)];
                }
                if v.abs() > 1e-9 {
                    found = Some((j, v));
                    break;
                }
            }
            if let Some((j, _)) = found {
                let mut d = vec![0.0; m];
                for r in 0..m {
                    let mut v = 0.0;
                    for k in 0..m {
                        v += t.binv[(r, k)] * t.a[(k, j)];
                    }
                    d[r] = v;
                }
                t.pivot(i, j, &d);
            }
        }
    }

    // Phase 2: original costs; artificial columns locked out.
    let mut c2 = vec![0.0; total];
    c2[..n_cols].copy_from_slice(&sf.c);
    let mut allowed2 = vec![true; n_cols];
    allowed2.resize(total, false);
    let optimal = t.run(&c2, &allowed2, max_iters)?;
    if !optimal {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            value: 0.0,
            x: vec![],
            dual: vec![],
            dual_value: 0.0,
            farkas: None,
        });
    }

    // Recover the primal point, duals and objective.
    let xb = t.xb();
    let mut x_std = vec![0.0; n_cols];
    for (i, &j) in t.basis.iter().enumerate() {
        if j < n_cols {
            x_std[j] = xb[i];
        }
    }
    let mut x = sf.shift.clone();
    for (k, mopt) in sf.col_map.iter().enumerate().take(sf.n_structural) {
        let (j, s) = mopt.unwrap();
        x[j] += s * x_std[k];
    }
    let min_value: f64 = sf.c.iter().zip(&x_std).map(|(c, v)| c * v).sum();
    let value = sense * min_value + sf.obj_offset;
    let y = t.duals(&c2);
    let mut dual = vec![0.0; lp.constraints.len()];
    for (i, mp) in sf.row_map.iter().enumerate() {
        if let Some((r, s)) = mp {
            dual[*r] = sense * y[i] * s;
        }
    }
    let dual_min: f64 = y.iter().zip(&sf.b).map(|(yi, bi)| yi * bi).sum();
    let dual_value = sense * dual_min + sf.obj_offset;
    Ok(LpResult { status: LpStatus::Optimal, value, x, dual, dual_value, farkas: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn max_x_le_1() {
        let mut lp = LinearProgram::new(true, vec![1.0]);
        lp.push(vec![1.0], ConstraintOp::Le, 1.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.x[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.value, r.dual_value, epsilon = 1e-9);
    }

    #[test]
    fn infeasible_with_farkas() {
        // x <= 0 and x >= 1 cannot both hold.
        let mut lp = LinearProgram::new(true, vec![1.0]);
        lp.push(vec![1.0], ConstraintOp::Le, 0.0);
        lp.push(vec![1.0], ConstraintOp::Ge, 1.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        let y = r.farkas.expect("farkas certificate");
        // y·b > 0 and yᵀA ≤ 0 over the lone column.
        let yb = y[0] * 0.0 + y[1] * 1.0;
        let ya = y[0] * 1.0 + y[1] * 1.0;
        assert!(yb > 1e-9, "y·b = {yb}");
        assert!(ya <= 1e-9, "yᵀa = {ya}");
        assert!(y[0] <= 1e-12 && y[1] >= -1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(true, vec![1.0, 0.0]);
        lp.push(vec![0.0, 1.0], ConstraintOp::Le, 1.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_mixture() {
        // Convex combination of (1,0) and (0,1) hitting (0.3, 0.7).
        let mut lp = LinearProgram::new(false, vec![0.0, 0.0]);
        lp.push(vec![1.0, 0.0], ConstraintOp::Eq, 0.3);
        lp.push(vec![0.0, 1.0], ConstraintOp::Eq, 0.7);
        lp.push(vec![1.0, 1.0], ConstraintOp::Eq, 1.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.x[0], 0.3, epsilon = 1e-9);
        assert_abs_diff_eq!(r.x[1], 0.7, epsilon = 1e-9);
    }

    #[test]
    fn bounded_box_with_free_variable() {
        // max a - t with a in [-1, 1], t free, a - t <= 0 → a = 1, t = 1? No:
        // maximizing a - t subject to t >= a pushes t down to a; optimum 0.
        let mut lp = LinearProgram::new(true, vec![1.0, -1.0]);
        lp.bounds = vec![(-1.0, 1.0), (f64::NEG_INFINITY, f64::INFINITY)];
        lp.push(vec![1.0, -1.0], ConstraintOp::Le, 0.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Beale's classic cycling example; Bland's rule must terminate.
        let mut lp = LinearProgram::new(false, vec![-0.75, 150.0, -0.02, 6.0]);
        lp.push(vec![0.25, -60.0, -0.04, 9.0], ConstraintOp::Le, 0.0);
        lp.push(vec![0.5, -90.0, -0.02, 3.0], ConstraintOp::Le, 0.0);
        lp.push(vec![0.0, 0.0, 1.0, 0.0], ConstraintOp::Le, 1.0);
        let r = solve_lp(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.value, -0.05, epsilon = 1e-9);
    }

    #[test]
    fn deterministic_repeat() {
        let mut lp = LinearProgram::new(true, vec![1.0, 2.0, 0.5]);
        lp.push(vec![1.0, 1.0, 1.0], ConstraintOp::Le, 2.0);
        lp.push(vec![1.0, 2.0, 3.0], ConstraintOp::Le, 3.0);
        let a = solve_lp(&lp).unwrap();
        let b = solve_lp(&lp).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.x.len(), b.x.len());
        for (u, v) in a.x.iter().zip(&b.x) {
            assert_eq!(u.to_bits(), v.to_bits());
        }
    }
}
