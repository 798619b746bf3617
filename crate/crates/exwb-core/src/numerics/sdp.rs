//! Dense primal-dual interior point SDP solver (Nesterov-Todd scaling,
//! Mehrotra predictor-corrector), plus a Dykstra alternating-projection
//! fallback for pure feasibility questions.
//!
//! Problems are equality-constrained over one symmetric matrix variable:
//! optimize ⟨C, X⟩ subject to ⟨A_k, X⟩ = b_k and X ⪰ 0. Feasibility is
//! decided through the shifted reformulation max t s.t. X − tI ⪰ 0, which is
//! strictly feasible on both sides whenever the affine system is consistent,
//! so the central path exists even when the original feasible set has empty
//! interior (boundary points are the common case in this domain).

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use super::{SDP_FEAS_TOL, SDP_INFEAS_MARGIN};

/// Dense symmetric matrix.
pub type SymMatrix = DMatrix<f64>;

/// An equality-constrained semidefinite program over one PSD matrix variable.
#[derive(Debug, Clone)]
pub struct SemidefiniteProgram {
    pub order: usize,
    /// Affine constraints `⟨A_k, X⟩ = b_k` (matrices must be symmetric).
    pub constraints: Vec<(SymMatrix, f64)>,
    /// Objective matrix; `solve_sdp` maximizes `⟨C, X⟩`. `None` means pure
    /// feasibility (use [`solve_sdp_feasibility`]).
    pub objective: Option<SymMatrix>,
}

impl SemidefiniteProgram {
    pub fn feasibility(order: usize, constraints: Vec<(SymMatrix, f64)>) -> Self {
        SemidefiniteProgram { order, constraints, objective: None }
    }
}

/// Convenience constructor: symmetric matrix from upper-triangle entries.
pub fn sym_from_entries(order: usize, entries: &[(usize, usize, f64)]) -> SymMatrix {
    let mut m = DMatrix::zeros(order, order);
    for &(i, j, v) in entries {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SdpResult {
    pub status: SdpStatus,
    /// `⟨C, X⟩` at the returned point (maximization sense).
    pub value: f64,
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub dual_value: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Outcome of a feasibility question `{X ⪰ 0 : ⟨A_k, X⟩ = b_k}`.
#[derive(Debug, Clone)]
pub enum SdpFeasibility {
    /// A matrix satisfying the constraints within [`SDP_FEAS_TOL`] whose
    /// minimum eigenvalue is ≥ `-1e-7`; `slack` is the optimal shift t*
    /// (λ-margin of the most interior feasible point).
    Feasible { x: SymMatrix, slack: f64 },
    /// Certified empty: `dual` satisfies `Σ y_k A_k ⪰ 0` and `b·y ≤ -margin`.
    Infeasible { dual: Vec<f64>, margin: f64 },
    Inconclusive { reason: String },
}

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("constraint matrix {index} is not symmetric")]
    NotSymmetric { index: usize },
    #[error("matrix order {got} exceeds the dense solver cap {cap}")]
    TooLarge { got: usize, cap: usize },
    #[error("constraint matrix {index} has order {got}, expected {expected}")]
    DimensionMismatch { index: usize, got: usize, expected: usize },
    #[error("objective matrix is not symmetric")]
    ObjectiveNotSymmetric,
    #[error("objective matrix missing; use solve_sdp_feasibility for feasibility mode")]
    MissingObjective,
}

const MAX_ORDER: usize = 512;
const MAX_ITERS: usize = 200;
const EPS_OPT: f64 = 1e-9;

fn check_symmetric(m: &SymMatrix) -> bool {
    let n = m.nrows();
    if n != m.ncols() {
        return false;
    }
    let scale = m.iter().map(|v| v.abs()).fold(0.0f64, f64::max).max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return false;
            }
        }
    }
    true
}

fn validate(sdp: &SemidefiniteProgram) -> Result<(), SdpError> {
    if sdp.order > MAX_ORDER {
        return Err(SdpError::TooLarge { got: sdp.order, cap: MAX_ORDER });
    }
    for (k, (a, _)) in sdp.constraints.iter().enumerate() {
        if a.nrows() != sdp.order {
            return Err(SdpError::DimensionMismatch {
                index: k,
                got: a.nrows(),
                expected: sdp.order,
            });
        }
        if !check_symmetric(a) {
            return Err(SdpError::NotSymmetric { index: k });
        }
    }
    if let Some(c) = &sdp.objective {
        if c.nrows() != sdp.order || !check_symmetric(c) {
            return Err(SdpError::ObjectiveNotSymmetric);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Block interior point core (minimization sense).
// ---------------------------------------------------------------------------

struct BlockProblem {
    blocks: Vec<usize>,
    /// a[k][blk]: constraint k restricted to each block.
    a: Vec<Vec<SymMatrix>>,
    b: Vec<f64>,
    c: Vec<SymMatrix>,
}

#[derive(Clone)]
struct BlockPoint {
    x: Vec<SymMatrix>,
    y: Vec<f64>,
    s: Vec<SymMatrix>,
}

struct IpmOutcome {
    point: BlockPoint,
    primal_residual: f64,
    dual_residual: f64,
    gap: f64,
    converged: bool,
    iterations: usize,
}

fn block_dot(a: &[SymMatrix], b: &[SymMatrix]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u.dot(v)).sum()
}

fn apply_a(p: &BlockProblem, x: &[SymMatrix]) -> Vec<f64> {
    p.a.iter().map(|ak| block_dot(ak, x)).collect()
}

fn apply_at(p: &BlockProblem, y: &[f64]) -> Vec<SymMatrix> {
    let mut out: Vec<SymMatrix> = p.blocks.iter().map(|&n| DMatrix::zeros(n, n)).collect();
    for (k, ak) in p.a.iter().enumerate() {
        let yk = y[k];
        if yk == 0.0 {
            continue;
        }
        for (blk, m) in ak.iter().enumerate() {
            out[blk] += m * yk;
        }
    }
    out
}

struct Scaling {
    g: SymMatrix,
    w: SymMatrix,
    lambda: Vec<f64>,
}

fn chol_lower(m: &SymMatrix) -> Option<SymMatrix> {
    let mut jitter = 0.0;
    let base = m.diagonal().iter().map(|v| v.abs()).fold(0.0f64, f64::max).max(1e-300);
    for _ in 0..6 {
        let trial = if jitter == 0.0 {
            m.clone()
        } else {
            m + DMatrix::identity(m.nrows(), m.nrows()) * jitter
        };
        if let Some(ch) = trial.cholesky() {
            return Some(ch.l());
        }
        jitter = if jitter == 0.0 { base * 1e-14 } else { jitter * 100.0 };
    }
    None
}

fn nt_scaling(x: &SymMatrix, s: &SymMatrix) -> Option<Scaling> {
    let n = x.nrows();
    let lx = chol_lower(x)?;
    let ls = chol_lower(s)?;
    let prod = ls.transpose() * &lx;
    let svd = prod.svd(true, true);
    let v = svd.v_t.as_ref()?.transpose();
    let sig = &svd.singular_values;
    if sig.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let mut g = &lx * v;
    for j in 0..n {
        let f = sig[j].sqrt();
        for i in 0..n {
            g[(i, j)] /= f;
        }
    }
    let w = &g * g.transpose();
    Some(Scaling { g, w, lambda: sig.iter().copied().collect() })
}

/// Largest step α with Λ + α D̃ ⪰ 0, via min eigenvalue of Λ^{-1/2} D̃ Λ^{-1/2}.
fn max_step(lambda: &[f64], dtilde: &SymMatrix) -> f64 {
    let n = lambda.len();
    let mut m = dtilde.clone();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] /= (lambda[i] * lambda[j]).sqrt();
        }
    }
    let m = (&m + m.transpose()) * 0.5;
    let eig = m.symmetric_eigen();
    let theta = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if theta >= -1e-16 {
        f64::INFINITY
    } else {
        -1.0 / theta
    }
}

fn solve_ipm(p: &BlockProblem) -> IpmOutcome {
    let m = p.b.len();
    let bnorm = 1.0 + p.b.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    let cnorm =
        1.0 + p.c.iter().flat_map(|c| c.iter()).map(|v| v.abs()).fold(0.0f64, f64::max);
    let nu: usize = p.blocks.iter().sum();

    let mut pt = BlockPoint {
        x: p.blocks.iter().map(|&n| DMatrix::identity(n, n) * bnorm).collect(),
        y: vec![0.0; m],
        s: p.blocks.iter().map(|&n| DMatrix::identity(n, n) * cnorm).collect(),
    };

    let mut best: Option<(f64, IpmOutcome)> = None;
    let mut iters = 0usize;

    for it in 0..MAX_ITERS {
        iters = it;
        // Residuals.
        let ax = apply_a(p, &pt.x);
        let rp: Vec<f64> = p.b.iter().zip(&ax).map(|(b, v)| b - v).collect();
        let aty = apply_at(p, &pt.y);
        let rd: Vec<SymMatrix> = p
            .c
            .iter()
            .zip(&aty)
            .zip(&pt.s)
            .map(|((c, at), s)| c - at - s)
            .collect();
        let rp_norm = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / bnorm;
        let rd_norm =
            rd.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt() / cnorm;
        let xs = block_dot(&pt.x, &pt.s);
        let pobj = block_dot(&p.c, &pt.x);
        let dobj: f64 = p.b.iter().zip(&pt.y).map(|(b, y)| b * y).sum();
        let gap = xs.abs() / (1.0 + pobj.abs() + dobj.abs());
        let mu = xs / nu as f64;

        let score = rp_norm.max(rd_norm).max(gap);
        let record = || IpmOutcome {
            point: pt.clone(),
            primal_residual: rp_norm,
            dual_residual: rd_norm,
            gap,
            converged: rp_norm <= EPS_OPT && rd_norm <= EPS_OPT && gap <= EPS_OPT,
            iterations: it,
        };
        if best.as_ref().map_or(true, |(s, _)| score < *s) {
            best = Some((score, record()));
        }
        if rp_norm <= EPS_OPT && rd_norm <= EPS_OPT && gap <= EPS_OPT {
            break;
        }

        // NT scaling per block.
        let scalings: Option<Vec<Scaling>> =
            pt.x.iter().zip(&pt.s).map(|(x, s)| nt_scaling(x, s)).collect();
        let Some(scalings) = scalings else { break };

        // Schur complement M_kl = Σ_blk ⟨A_k, W A_l W⟩.
        let waw: Vec<Vec<SymMatrix>> = (0..m)
            .map(|l| {
                p.a[l]
                    .iter()
                    .zip(&scalings)
                    .map(|(a, sc)| &sc.w * a * &sc.w)
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut schur = DMatrix::<f64>::zeros(m, m);
        for k in 0..m {
            for l in 0..=k {
                let v = block_dot(&p.a[k], &waw[l]);
                schur[(k, l)] = v;
                schur[(l, k)] = v;
            }
        }
        let Some(schur_chol) = chol_lower(&schur).map(|l| {
            // Re-wrap as nalgebra Cholesky-like solve via triangular solves.
            l
        }) else {
            break;
        };
        let solve_schur = |rhs: &[f64]| -> Vec<f64> {
            // Forward/backward substitution with the lower factor.
            let mm = rhs.len();
            let mut z = rhs.to_vec();
            for i in 0..mm {
                for j in 0..i {
                    z[i] -= schur_chol[(i, j)] * z[j];
                }
                z[i] /= schur_chol[(i, i)];
            }
            for i in (0..mm).rev() {
                for j in (i + 1)..mm {
                    z[i] -= schur_chol[(j, i)] * z[j];
                }
                z[i] /= schur_chol[(i, i)];
            }
            z
        };

        // A(W Rd W) reusable piece.
        let wrdw: Vec<SymMatrix> =
            rd.iter().zip(&scalings).map(|(r, sc)| &sc.w * r * &sc.w).collect();
        let a_wrdw: Vec<f64> = p.a.iter().map(|ak| block_dot(ak, &wrdw)).collect();

        let direction = |rc: &[SymMatrix]| -> (Vec<SymMatrix>, Vec<f64>, Vec<SymMatrix>, Vec<SymMatrix>, Vec<SymMatrix>) {
            // E has E_ij = 2 Rc_ij / (λ_i + λ_j); dX = G E Gᵀ − W dS W.
            let e: Vec<SymMatrix> = rc
                .iter()
                .zip(&scalings)
                .map(|(r, sc)| {
                    let n = r.nrows();
                    let mut e = r.clone();
                    for i in 0..n {
                        for j in 0..n {
                            e[(i, j)] *= 2.0 / (sc.lambda[i] + sc.lambda[j]);
                        }
                    }
                    e
                })
                .collect();
            let gegt: Vec<SymMatrix> = e
                .iter()
                .zip(&scalings)
                .map(|(e, sc)| &sc.g * e * sc.g.transpose())
                .collect();
            let a_gegt: Vec<f64> = p.a.iter().map(|ak| block_dot(ak, &gegt)).collect();
            let rhs: Vec<f64> = (0..m).map(|k| rp[k] - a_gegt[k] + a_wrdw[k]).collect();
            let dy = solve_schur(&rhs);
            let atdy = apply_at(p, &dy);
            let ds: Vec<SymMatrix> =
                rd.iter().zip(&atdy).map(|(r, at)| r - at).collect();
            let dx: Vec<SymMatrix> = gegt
                .iter()
                .zip(&ds)
                .zip(&scalings)
                .map(|((ge, ds), sc)| ge - &sc.w * ds * &sc.w)
                .collect();
            // Scaled directions for steps / corrector.
            let ds_t: Vec<SymMatrix> = ds
                .iter()
                .zip(&scalings)
                .map(|(ds, sc)| sc.g.transpose() * ds * &sc.g)
                .collect();
            let dx_t: Vec<SymMatrix> = e.iter().zip(&ds_t).map(|(e, dst)| e - dst).collect();
            (dx, dy, ds, dx_t, ds_t)
        };

        // Predictor (affine, σ = 0).
        let rc_aff: Vec<SymMatrix> = scalings
            .iter()
            .map(|sc| {
                let n = sc.lambda.len();
                let mut r = DMatrix::zeros(n, n);
                for i in 0..n {
                    r[(i, i)] = -sc.lambda[i] * sc.lambda[i];
                }
                r
            })
            .collect();
        let (dx_a, _dy_a, ds_a, dxt_a, dst_a) = direction(&rc_aff);
        let alpha_a = pt
            .x
            .iter()
            .zip(&dxt_a)
            .zip(&scalings)
            .map(|((_, d), sc)| max_step(&sc.lambda, d))
            .fold(f64::INFINITY, f64::min)
            .min(1.0 / 0.99)
            * 0.99;
        let beta_a = pt
            .s
            .iter()
            .zip(&dst_a)
            .zip(&scalings)
            .map(|((_, d), sc)| max_step(&sc.lambda, d))
            .fold(f64::INFINITY, f64::min)
            .min(1.0 / 0.99)
            * 0.99;
        let mut mu_aff = 0.0;
        for blk in 0..p.blocks.len() {
            let xa = &pt.x[blk] + &dx_a[blk] * alpha_a.min(1.0);
            let sa = &pt.s[blk] + &ds_a[blk] * beta_a.min(1.0);
            mu_aff += xa.dot(&sa);
        }
        mu_aff /= nu as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(1e-8, 1.0);

        // Corrector.
        let rc: Vec<SymMatrix> = scalings
            .iter()
            .enumerate()
            .map(|(blk, sc)| {
                let n = sc.lambda.len();
                let cross = (&dxt_a[blk] * &dst_a[blk] + &dst_a[blk] * &dxt_a[blk]) * 0.5;
                let mut r = -cross;
                for i in 0..n {
                    r[(i, i)] += sigma * mu - sc.lambda[i] * sc.lambda[i];
                }
                r
            })
            .collect();
        let (dx, dy, ds, dx_t, ds_t) = direction(&rc);
        let alpha = dx_t
            .iter()
            .zip(&scalings)
            .map(|(d, sc)| max_step(&sc.lambda, d))
            .fold(f64::INFINITY, f64::min)
            .min(1.0 / 0.99)
            * 0.99;
        let beta = ds_t
            .iter()
            .zip(&scalings)
            .map(|(d, sc)| max_step(&sc.lambda, d))
            .fold(f64::INFINITY, f64::min)
            .min(1.0 / 0.99)
            * 0.99;
        let alpha = alpha.min(1.0);
        let beta = beta.min(1.0);
        if alpha < 1e-12 && beta < 1e-12 {
            break;
        }
        for blk in 0..p.blocks.len() {
            pt.x[blk] += &dx[blk] * alpha;
            pt.s[blk] += &ds[blk] * beta;
            let xs = (&pt.x[blk] + pt.x[blk].transpose()) * 0.5;
            pt.x[blk] = xs;
            let ss = (&pt.s[blk] + pt.s[blk].transpose()) * 0.5;
            pt.s[blk] = ss;
        }
        for k in 0..m {
            pt.y[k] += beta * dy[k];
        }
    }

    let (_, mut out) = best.expect("at least one iterate recorded");
    out.iterations = iters;
    out
}

// ---------------------------------------------------------------------------
// Public entry points.
// ---------------------------------------------------------------------------

/// Maximize `⟨C, X⟩` over `{X ⪰ 0 : ⟨A_k, X⟩ = b_k}`.
pub fn solve_sdp(sdp: &SemidefiniteProgram) -> Result<SdpResult, SdpError> {
    validate(sdp)?;
    let c = sdp.objective.as_ref().ok_or(SdpError::MissingObjective)?;
    let p = BlockProblem {
        blocks: vec![sdp.order],
        a: sdp.constraints.iter().map(|(a, _)| vec![a.clone()]).collect(),
        b: sdp.constraints.iter().map(|(_, b)| *b).collect(),
        c: vec![-c.clone()],
    };
    let out = solve_ipm(&p);
    let x = out.point.x.into_iter().next().unwrap();
    let value = c.dot(&x);
    let dual_value: f64 = p.b.iter().zip(&out.point.y).map(|(b, y)| b * y).sum();
    Ok(SdpResult {
        status: if out.converged { SdpStatus::Optimal } else { SdpStatus::Inconclusive },
        value,
        x,
        y: out.point.y,
        dual_value: -dual_value,
        primal_residual: out.primal_residual,
        dual_residual: out.dual_residual,
        gap: out.gap,
        iterations: out.iterations,
    })
}

/// Decide `{X ⪰ 0 : ⟨A_k, X⟩ = b_k} ≠ ∅` with a certificate either way.
pub fn solve_sdp_feasibility(sdp: &SemidefiniteProgram) -> Result<SdpFeasibility, SdpError> {
    validate(sdp)?;
    let n = sdp.order;
    let m = sdp.constraints.len();
    if m == 0 {
        return Ok(SdpFeasibility::Feasible { x: DMatrix::zeros(n, n), slack: 0.0 });
    }

    // Least-squares filler X0 = A*(ξ) with (AA*)ξ = b.
    let mut gram = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        for l in 0..=k {
            let v = sdp.constraints[k].0.dot(&sdp.constraints[l].0);
            gram[(k, l)] = v;
            gram[(l, k)] = v;
        }
    }
    let b = DVector::from_iterator(m, sdp.constraints.iter().map(|(_, b)| *b));
    let ridge = DMatrix::identity(m, m) * 1e-12;
    let Some(chol) = (gram.clone() + ridge).cholesky() else {
        return Ok(SdpFeasibility::Inconclusive {
            reason: "constraint Gram matrix is numerically singular".into(),
        });
    };
    let xi = chol.solve(&b);
    // Consistency of the affine system itself.
    let mut x0 = DMatrix::<f64>::zeros(n, n);
    for k in 0..m {
        x0 += &sdp.constraints[k].0 * xi[k];
    }
    let affine_resid = sdp
        .constraints
        .iter()
        .map(|(a, bk)| (a.dot(&x0) - bk).abs())
        .fold(0.0f64, f64::max);
    if affine_resid > 1e-6 * (1.0 + b.amax()) {
        return Ok(SdpFeasibility::Inconclusive {
            reason: format!("affine system inconsistent (residual {affine_resid:.3e})"),
        });
    }

    let a_trace: Vec<f64> = sdp.constraints.iter().map(|(a, _)| a.trace()).collect();
    if a_trace.iter().all(|v| v.abs() < 1e-14) {
        return Ok(SdpFeasibility::Inconclusive {
            reason: "all constraint matrices are traceless; shift reformulation degenerate".into(),
        });
    }

    let lam_min = x0.clone().symmetric_eigen().eigenvalues.min();
    let shift = lam_min - 1.0;

    // max u  s.t.  A(Y) + u·A(I) = b − shift·A(I),  Y ⪰ 0,  u ≥ 0.
    let p = BlockProblem {
        blocks: vec![n, 1],
        a: sdp
            .constraints
            .iter()
            .zip(&a_trace)
            .map(|((a, _), tr)| vec![a.clone(), DMatrix::from_element(1, 1, *tr)])
            .collect(),
        b: sdp
            .constraints
            .iter()
            .zip(&a_trace)
            .map(|((_, bk), tr)| bk - shift * tr)
            .collect(),
        c: vec![DMatrix::zeros(n, n), DMatrix::from_element(1, 1, -1.0)],
    };
    let out = solve_ipm(&p);
    let u = out.point.x[1][(0, 0)];
    let t_star = u + shift;

    if out.converged || (out.primal_residual < 1e-7 && out.gap < 1e-7) {
        if t_star >= -SDP_FEAS_TOL {
            let x = &out.point.x[0] + DMatrix::identity(n, n) * t_star;
            return Ok(SdpFeasibility::Feasible { x, slack: t_star });
        }
        if t_star < -SDP_INFEAS_MARGIN {
            // Farkas pair from the dual: w = −y with Σ w_k A_k ⪰ 0, b·w < 0.
            let w: Vec<f64> = out.point.y.iter().map(|v| -v).collect();
            let mut z = DMatrix::<f64>::zeros(n, n);
            for k in 0..m {
                z += &sdp.constraints[k].0 * w[k];
            }
            let z_min = z.symmetric_eigen().eigenvalues.min();
            let bw: f64 = sdp.constraints.iter().zip(&w).map(|((_, bk), wk)| bk * wk).sum();
            if z_min >= -1e-7 && bw < -SDP_INFEAS_MARGIN {
                return Ok(SdpFeasibility::Infeasible { dual: w, margin: -bw });
            }
            return Ok(SdpFeasibility::Inconclusive {
                reason: format!(
                    "shift optimum {t_star:.3e} negative but dual certificate failed re-check \
                     (min eig {z_min:.3e}, b·w {bw:.3e})"
                ),
            });
        }
        return Ok(SdpFeasibility::Inconclusive {
            reason: format!("boundary band: optimal shift {t_star:.3e}"),
        });
    }

    // Interior point did not converge; try the Dykstra fallback for the
    // feasible side before giving up.
    if let Some(x) = dykstra_feasibility(sdp, 4000) {
        return Ok(SdpFeasibility::Feasible { x, slack: 0.0 });
    }
    Ok(SdpFeasibility::Inconclusive {
        reason: format!(
            "interior point stalled (rp {:.3e}, rd {:.3e}, gap {:.3e})",
            out.primal_residual, out.dual_residual, out.gap
        ),
    })
}

/// Dykstra alternating projections between the PSD cone and the affine
/// subspace. Returns a point meeting [`SDP_FEAS_TOL`] on both, if found.
fn dykstra_feasibility(sdp: &SemidefiniteProgram, iters: usize) -> Option<SymMatrix> {
    let n = sdp.order;
    let m = sdp.constraints.len();
    let mut gram = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        for l in 0..=k {
            let v = sdp.constraints[k].0.dot(&sdp.constraints[l].0);
            gram[(k, l)] = v;
            gram[(l, k)] = v;
        }
    }
    let chol = (gram + DMatrix::identity(m, m) * 1e-12).cholesky()?;
    let b = DVector::from_iterator(m, sdp.constraints.iter().map(|(_, b)| *b));

    let project_affine = |x: &SymMatrix| -> SymMatrix {
        let ax = DVector::from_iterator(m, sdp.constraints.iter().map(|(a, _)| a.dot(x)));
        let corr = chol.solve(&(ax - &b));
        let mut out = x.clone();
        for k in 0..m {
            out -= &sdp.constraints[k].0 * corr[k];
        }
        out
    };
    let project_psd = |x: &SymMatrix| -> SymMatrix {
        let eig = ((x + x.transpose()) * 0.5).symmetric_eigen();
        let mut out = DMatrix::zeros(n, n);
        for (i, &ev) in eig.eigenvalues.iter().enumerate() {
            if ev > 0.0 {
                let v = eig.eigenvectors.column(i);
                out += v * v.transpose() * ev;
            }
        }
        out
    };

    let mut x = project_affine(&DMatrix::zeros(n, n));
    let mut p = DMatrix::<f64>::zeros(n, n);
    for _ in 0..iters {
        let y = project_psd(&(&x + &p));
        let p_new = &x + &p - &y;
        let x_new = project_affine(&y);
        let moved = (&x_new - &x).norm();
        x = x_new;
        p = p_new;
        let affine_ok = sdp
            .constraints
            .iter()
            .all(|(a, bk)| (a.dot(&x) - bk).abs() <= SDP_FEAS_TOL);
        let eig_min = x.clone().symmetric_eigen().eigenvalues.min();
        if affine_ok && eig_min >= -SDP_FEAS_TOL {
            return Some(x);
        }
        if moved < 1e-14 {
            break;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::min_eigenvalue_symmetric;
    use approx::assert_abs_diff_eq;

    fn theta_c5_program() -> SemidefiniteProgram {
        // Gram handle form on C5: order 6, X_00 = 1, X_ii = X_0i, edge zeros.
        let n = 6;
        let mut cons = vec![(sym_from_entries(n, &[(0, 0, 1.0)]), 1.0)];
        for i in 1..=5usize {
            let a = sym_from_entries(n, &[(i, i, 1.0), (0, i, -0.5)]);
            cons.push((a, 0.0));
        }
        for k in 0..5usize {
            let (i, j) = (1 + k, 1 + (k + 1) % 5);
            cons.push((sym_from_entries(n, &[(i.min(j), i.max(j), 0.5)]), 0.0));
        }
        let mut c = DMatrix::zeros(n, n);
        for i in 1..=5 {
            c[(i, i)] = 1.0;
        }
        SemidefiniteProgram { order: n, constraints: cons, objective: Some(c) }
    }

    #[test]
    fn trivial_feasibility() {
        let sdp = SemidefiniteProgram::feasibility(
            3,
            vec![(sym_from_entries(3, &[(0, 0, 1.0)]), 1.0)],
        );
        match solve_sdp_feasibility(&sdp).unwrap() {
            SdpFeasibility::Feasible { x, slack } => {
                assert!(slack > 0.1, "interior slack expected, got {slack}");
                assert_abs_diff_eq!(x[(0, 0)], 1.0, epsilon = 1e-6);
                assert!(min_eigenvalue_symmetric(&x) >= -1e-7);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn trivial_infeasibility() {
        let sdp = SemidefiniteProgram::feasibility(
            2,
            vec![(sym_from_entries(2, &[(0, 0, 1.0)]), -1.0)],
        );
        match solve_sdp_feasibility(&sdp).unwrap() {
            SdpFeasibility::Infeasible { dual, margin } => {
                assert!(margin > 0.5, "margin {margin}");
                let mut z = DMatrix::zeros(2, 2);
                z += sym_from_entries(2, &[(0, 0, 1.0)]) * dual[0];
                assert!(min_eigenvalue_symmetric(&z) >= -1e-7);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn lovasz_theta_of_pentagon() {
        let sdp = theta_c5_program();
        let r = solve_sdp(&sdp).unwrap();
        assert_eq!(r.status, SdpStatus::Optimal);
        assert_abs_diff_eq!(r.value, 5.0f64.sqrt(), epsilon = 1e-6);
        // Duality gap and PSD-ness of the returned matrix, checked by the
        // independent eigenvalue routine.
        assert!((r.value - r.dual_value).abs() <= 1e-6 * (1.0 + r.value.abs()));
        assert!(min_eigenvalue_symmetric(&r.x) >= -1e-7);
    }

    #[test]
    fn deterministic_bitwise() {
        let sdp = theta_c5_program();
        let a = solve_sdp(&sdp).unwrap();
        let b = solve_sdp(&sdp).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn boundary_feasibility_pentagon() {
        // Uniform 1/sqrt(5) lies exactly on the theta-body boundary of C5.
        let n = 6;
        let w = 1.0 / 5.0f64.sqrt();
        let mut cons = vec![(sym_from_entries(n, &[(0, 0, 1.0)]), 1.0)];
        for i in 1..=5usize {
            cons.push((sym_from_entries(n, &[(i, i, 1.0)]), w));
            cons.push((sym_from_entries(n, &[(0, i, 0.5)]), w));
        }
        for k in 0..5usize {
            let (i, j) = (1 + k, 1 + (k + 1) % 5);
            cons.push((sym_from_entries(n, &[(i.min(j), i.max(j), 0.5)]), 0.0));
        }
        let sdp = SemidefiniteProgram::feasibility(n, cons);
        match solve_sdp_feasibility(&sdp).unwrap() {
            SdpFeasibility::Feasible { x, slack } => {
                assert!(slack.abs() <= 1e-5, "boundary slack should be ~0, got {slack}");
                assert!(min_eigenvalue_symmetric(&x) >= -1e-6);
            }
            other => panic!("expected (boundary) feasible, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_just_past_boundary() {
        // Uniform 0.45 > 1/sqrt(5) is outside TH(C5).
        let n = 6;
        let w = 0.45;
        let mut cons = vec![(sym_from_entries(n, &[(0, 0, 1.0)]), 1.0)];
        for i in 1..=5usize {
            cons.push((sym_from_entries(n, &[(i, i, 1.0)]), w));
            cons.push((sym_from_entries(n, &[(0, i, 0.5)]), w));
        }
        for k in 0..5usize {
            let (i, j) = (1 + k, 1 + (k + 1) % 5);
            cons.push((sym_from_entries(n, &[(i.min(j), i.max(j), 0.5)]), 0.0));
        }
        let sdp = SemidefiniteProgram::feasibility(n, cons);
        match solve_sdp_feasibility(&sdp).unwrap() {
            SdpFeasibility::Infeasible { dual, margin } => {
                assert!(margin > SDP_INFEAS_MARGIN);
                let mut z = DMatrix::zeros(n, n);
                for (k, (a, _)) in sdp.constraints.iter().enumerate() {
                    z += a * dual[k];
                }
                assert!(min_eigenvalue_symmetric(&z) >= -1e-7);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let mut a = DMatrix::zeros(2, 2);
        a[(0, 1)] = 1.0;
        let sdp = SemidefiniteProgram::feasibility(2, vec![(a, 0.0)]);
        assert!(matches!(
            solve_sdp_feasibility(&sdp),
            Err(SdpError::NotSymmetric { index: 0 })
        ));
    }
}
