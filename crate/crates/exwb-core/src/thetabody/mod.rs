//! The theta body TH(G): semidefinite membership with vector certificates,
//! linear optimization, antiblocker duality evidence and the E^n sandwich
//! report on the uniform ray.
//!
//! Membership uses the Gram-handle form: an (n+1)-order PSD matrix M with
//! M_00 = 1, M_ii = M_0i = w_i and M_ij = 0 on edges. Factoring M recovers
//! the unit handle and one unit vector per vertex with w_i = ⟨x_i, ψ⟩² and
//! edge orthogonality, which is the vector characterization the membership
//! claim is checked against.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exgraph::{complement, is_self_complementary, ExclusivityGraph, IsoError, VertexWeights};
use crate::numerics::{
    min_eigenvalue_symmetric, solve_sdp, solve_sdp_feasibility, sym_from_entries, SdpError,
    SdpFeasibility, SdpStatus, SemidefiniteProgram, SymMatrix,
};
use crate::polytope::{max_weight_clique, PolytopeError};

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("weights have length {got}, expected {expected}")]
    WeightDimension { got: usize, expected: usize },
    #[error("direction must be nonnegative")]
    NegativeDirection,
    #[error("graph is not self-complementary")]
    NotSelfComplementary,
    #[error("graph is not vertex-transitive")]
    NotVertexTransitive,
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Exgraph(#[from] crate::exgraph::ExgraphError),
    #[error("sdp inconclusive: {0}")]
    Inconclusive(String),
}

/// Gram-handle certificate of theta-body membership.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaCertificate {
    /// (n+1)-order Gram matrix, row-major; index 0 is the handle.
    pub gram: Vec<Vec<f64>>,
    /// Unit handle vector ψ.
    pub handle: Vec<f64>,
    /// One unit vector per vertex (zero-weight vertices get a fresh
    /// orthogonal axis).
    pub vectors: Vec<Vec<f64>>,
    pub residuals: ThetaResiduals,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaResiduals {
    /// Max |constraint residual| of the Gram matrix entries.
    pub gram_constraint: f64,
    /// Min eigenvalue of the Gram matrix (independent Jacobi route).
    pub gram_min_eigenvalue: f64,
    /// Max | ‖x‖ − 1 | over handle and vertex vectors.
    pub unit_norm: f64,
    /// Max |⟨v_i, v_j⟩| over edges for the unnormalized vectors v_i = √w_i x_i.
    pub edge_orthogonality: f64,
    /// Max | ⟨x_i, ψ⟩² − w_i |.
    pub weight_reproduction: f64,
}

#[derive(Debug, Clone)]
pub enum ThetaVerdict {
    Member(Box<ThetaCertificate>),
    /// Dual ray over the constraint list (see [`theta_constraints`]):
    /// Σ y_k A_k ⪰ 0 with b·y ≤ −margin.
    NonMember { dual: Vec<f64>, margin: f64 },
    Inconclusive { reason: String },
}

/// The membership constraint system for w ∈ TH(G), in documented order:
/// X_00 = 1; then per vertex i (ascending) X_ii = w_i and X_0i = w_i; then
/// X_ij = 0 per edge (sorted).
pub fn theta_constraints(
    g: &ExclusivityGraph,
    w: &VertexWeights,
) -> Vec<(SymMatrix, f64)> {
    let n = g.len();
    let order = n + 1;
    let mut cons = vec![(sym_from_entries(order, &[(0, 0, 1.0)]), 1.0)];
    for i in 0..n {
        cons.push((sym_from_entries(order, &[(i + 1, i + 1, 1.0)]), w[i]));
        cons.push((sym_from_entries(order, &[(0, i + 1, 0.5)]), w[i]));
    }
    for (i, j) in g.edges() {
        cons.push((sym_from_entries(order, &[(i + 1, j + 1, 0.5)]), 0.0));
    }
    cons
}

/// Decide w ∈ TH(G). Feasible answers carry an independently re-checkable
/// Gram/vector certificate; infeasible answers a dual ray with margin.
/// Boundary points within the solver band come back `Inconclusive`.
pub fn in_theta_body(g: &ExclusivityGraph, w: &VertexWeights) -> Result<ThetaVerdict, ThetaError> {
    if w.len() != g.len() {
        return Err(ThetaError::WeightDimension { got: w.len(), expected: g.len() });
    }
    let cons = theta_constraints(g, w);
    let sdp = SemidefiniteProgram::feasibility(g.len() + 1, cons);
    match solve_sdp_feasibility(&sdp)? {
        SdpFeasibility::Feasible { x, .. } => {
            Ok(ThetaVerdict::Member(Box::new(extract_certificate(g, w, &x))))
        }
        SdpFeasibility::Infeasible { dual, margin } => Ok(ThetaVerdict::NonMember { dual, margin }),
        SdpFeasibility::Inconclusive { reason } => Ok(ThetaVerdict::Inconclusive { reason }),
    }
}

fn extract_certificate(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    x: &SymMatrix,
) -> ThetaCertificate {
    let n = g.len();
    let order = n + 1;
    // Factor M = P diag(λ₊) Pᵀ; column vectors live in R^order, extended by
    // one fresh axis per (near-)zero-weight vertex.
    let eig = x.clone().symmetric_eigen();
    let zeroish: Vec<usize> = (0..n).filter(|&i| w[i] <= 1e-9).collect();
    let dim = order + zeroish.len();
    let mut vecs: Vec<Vec<f64>> = vec![vec![0.0; dim]; order];
    for (k, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev <= 0.0 {
            continue;
        }
        let s = ev.sqrt();
        for r in 0..order {
            vecs[r][k] = s * eig.eigenvectors[(r, k)];
        }
    }
    // Handle: normalize exactly to unit length.
    let handle_norm = norm(&vecs[0]);
    let handle: Vec<f64> = vecs[0].iter().map(|v| v / handle_norm).collect();
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        let raw = &vecs[i + 1];
        if w[i] <= 1e-9 {
            // Fresh orthogonal axis: unit, orthogonal to everything else.
            let slot = order + zeroish.iter().position(|&z| z == i).unwrap();
            let mut v = vec![0.0; dim];
            v[slot] = 1.0;
            vectors.push(v);
        } else {
            let nrm = norm(raw);
            vectors.push(raw.iter().map(|v| v / nrm).collect());
        }
    }

    // Residuals.
    let mut gram_constraint: f64 = (x[(0, 0)] - 1.0).abs();
    for i in 0..n {
        gram_constraint = gram_constraint.max((x[(i + 1, i + 1)] - w[i]).abs());
        gram_constraint = gram_constraint.max((x[(0, i + 1)] - w[i]).abs());
    }
    for (i, j) in g.edges() {
        gram_constraint = gram_constraint.max(x[(i + 1, j + 1)].abs());
    }
    let gram_min_eigenvalue = min_eigenvalue_symmetric(x);
    let mut unit_norm = (norm(&handle) - 1.0).abs();
    for v in &vectors {
        unit_norm = unit_norm.max((norm(v) - 1.0).abs());
    }
    let mut edge_orthogonality = 0.0f64;
    for (i, j) in g.edges() {
        let vi = scaled(&vectors[i], w[i].max(0.0).sqrt());
        let vj = scaled(&vectors[j], w[j].max(0.0).sqrt());
        edge_orthogonality = edge_orthogonality.max(dot(&vi, &vj).abs());
    }
    let mut weight_reproduction = 0.0f64;
    for i in 0..n {
        let overlap = dot(&vectors[i], &handle);
        weight_reproduction = weight_reproduction.max((overlap * overlap - w[i]).abs());
    }

    let gram = (0..order).map(|r| (0..order).map(|c| x[(r, c)]).collect()).collect();
    ThetaCertificate {
        gram,
        handle,
        vectors,
        residuals: ThetaResiduals {
            gram_constraint,
            gram_min_eigenvalue,
            unit_norm,
            edge_orthogonality,
            weight_reproduction,
        },
    }
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn scaled(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

/// Independent re-check of a membership certificate (no solver trust):
/// Gram constraints, PSD-ness by the Jacobi route, unit norms, edge
/// orthogonality of the √w-scaled vectors, and weight reproduction.
pub fn verify_theta_certificate(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    cert: &ThetaCertificate,
) -> bool {
    let n = g.len();
    if cert.gram.len() != n + 1 || cert.vectors.len() != n {
        return false;
    }
    let order = n + 1;
    let m = DMatrix::from_fn(order, order, |r, c| cert.gram[r][c]);
    let mut worst = (m[(0, 0)] - 1.0).abs();
    for i in 0..n {
        worst = worst.max((m[(i + 1, i + 1)] - w[i]).abs());
        worst = worst.max((m[(0, i + 1)] - w[i]).abs());
    }
    for (i, j) in g.edges() {
        worst = worst.max(m[(i + 1, j + 1)].abs());
    }
    if worst > 1e-6 {
        return false;
    }
    if min_eigenvalue_symmetric(&m) < -1e-7 {
        return false;
    }
    if (norm(&cert.handle) - 1.0).abs() > 1e-6 {
        return false;
    }
    for v in &cert.vectors {
        if (norm(v) - 1.0).abs() > 1e-6 {
            return false;
        }
    }
    for (i, j) in g.edges() {
        let vi = scaled(&cert.vectors[i], w[i].max(0.0).sqrt());
        let vj = scaled(&cert.vectors[j], w[j].max(0.0).sqrt());
        if dot(&vi, &vj).abs() > 1e-6 {
            return false;
        }
    }
    for i in 0..n {
        let overlap = dot(&cert.vectors[i], &cert.handle);
        if (overlap * overlap - w[i]).abs() > 1e-6 {
            return false;
        }
    }
    true
}

/// Independent re-check of a non-membership dual ray.
pub fn verify_theta_nonmember(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    dual: &[f64],
) -> bool {
    let cons = theta_constraints(g, w);
    if dual.len() != cons.len() {
        return false;
    }
    let order = g.len() + 1;
    let mut z = DMatrix::<f64>::zeros(order, order);
    let mut bw = 0.0;
    for ((a, b), &y) in cons.iter().zip(dual) {
        z += a * y;
        bw += b * y;
    }
    min_eigenvalue_symmetric(&z) >= -1e-7 && bw <= -1e-7
}

/// Maximize c·w over TH(G) (c ≥ 0). For the all-ones direction this is the
/// Lovász number of G.
pub fn max_linear_over_theta(
    g: &ExclusivityGraph,
    c: &[f64],
) -> Result<f64, ThetaError> {
    if c.len() != g.len() {
        return Err(ThetaError::WeightDimension { got: c.len(), expected: g.len() });
    }
    if c.iter().any(|&v| v < 0.0) {
        return Err(ThetaError::NegativeDirection);
    }
    let n = g.len();
    let order = n + 1;
    let mut cons = vec![(sym_from_entries(order, &[(0, 0, 1.0)]), 1.0)];
    for i in 0..n {
        cons.push((
            sym_from_entries(order, &[(i + 1, i + 1, 1.0), (0, i + 1, -0.5)]),
            0.0,
        ));
    }
    for (i, j) in g.edges() {
        cons.push((sym_from_entries(order, &[(i + 1, j + 1, 0.5)]), 0.0));
    }
    let mut obj = DMatrix::zeros(order, order);
    for i in 0..n {
        obj[(i + 1, i + 1)] = c[i];
    }
    let sdp = SemidefiniteProgram { order, constraints: cons, objective: Some(obj) };
    let r = solve_sdp(&sdp)?;
    if r.status != SdpStatus::Optimal {
        return Err(ThetaError::Inconclusive(format!(
            "optimizer stalled (gap {:.3e})",
            r.gap
        )));
    }
    Ok(r.value)
}

/// Largest s with s·d ∈ TH(G) along a nonnegative direction d ≠ 0.
pub fn theta_boundary_scale(g: &ExclusivityGraph, d: &[f64]) -> Result<f64, ThetaError> {
    if d.len() != g.len() {
        return Err(ThetaError::WeightDimension { got: d.len(), expected: g.len() });
    }
    if d.iter().any(|&v| v < 0.0) {
        return Err(ThetaError::NegativeDirection);
    }
    // Order n+2: index 0 handle, 1..=n vertices, n+1 the scale slot s.
    let n = g.len();
    let order = n + 2;
    let slot = n + 1;
    let mut cons = vec![(sym_from_entries(order, &[(0, 0, 1.0)]), 1.0)];
    for i in 0..n {
        cons.push((
            sym_from_entries(order, &[(i + 1, i + 1, 1.0), (slot, slot, -d[i])]),
            0.0,
        ));
        cons.push((
            sym_from_entries(order, &[(0, i + 1, 0.5), (slot, slot, -d[i])]),
            0.0,
        ));
    }
    for (i, j) in g.edges() {
        cons.push((sym_from_entries(order, &[(i + 1, j + 1, 0.5)]), 0.0));
    }
    let mut obj = DMatrix::zeros(order, order);
    obj[(slot, slot)] = 1.0;
    let sdp = SemidefiniteProgram { order, constraints: cons, objective: Some(obj) };
    let r = solve_sdp(&sdp)?;
    if r.status != SdpStatus::Optimal {
        return Err(ThetaError::Inconclusive(format!(
            "boundary-scale optimizer stalled (gap {:.3e})",
            r.gap
        )));
    }
    Ok(r.value)
}

#[derive(Debug, Clone, Serialize)]
pub struct AntiblockerSample {
    pub direction: Vec<f64>,
    pub boundary_point: Vec<f64>,
    pub mapped_direction: Vec<f64>,
    pub max_inner_product: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AntiblockerReport {
    pub samples: Vec<AntiblockerSample>,
    pub max_value: f64,
    pub all_within: bool,
    pub tolerance: f64,
}

pub const ANTIBLOCKER_TOL: f64 = 1e-4;

/// Sampled evidence for abl(TH(G)) = TH(Ḡ) on a self-complementary graph:
/// scale seeded random directions to the TH(G) boundary, push them through a
/// self-complementarity bijection (landing on the TH(Ḡ) boundary) and verify
/// max p·q over TH(G) stays ≤ 1 + tol.
pub fn antiblocker_duality_check(
    g: &ExclusivityGraph,
    samples: usize,
    seed: u64,
) -> Result<AntiblockerReport, ThetaError> {
    let witness = is_self_complementary(g)?.ok_or(ThetaError::NotSelfComplementary)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = g.len();
    let mut out = Vec::with_capacity(samples);
    let mut max_value = f64::NEG_INFINITY;
    for _ in 0..samples {
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02..1.0)).collect();
        let s = theta_boundary_scale(g, &d)?;
        let boundary: Vec<f64> = d.iter().map(|v| v * s).collect();
        let mut mapped = vec![0.0; n];
        for i in 0..n {
            mapped[witness[i]] = boundary[i];
        }
        let v = max_linear_over_theta(g, &mapped)?;
        max_value = max_value.max(v);
        out.push(AntiblockerSample {
            direction: d,
            boundary_point: boundary,
            mapped_direction: mapped,
            max_inner_product: v,
        });
    }
    Ok(AntiblockerReport {
        samples: out,
        max_value,
        all_within: max_value <= 1.0 + ANTIBLOCKER_TOL,
        tolerance: ANTIBLOCKER_TOL,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    /// u_n = ω(G^{∗n})^{−1/n} for n = 1..n_max (largest uniform weight in E^n).
    pub upper: Vec<f64>,
    /// Exact clique numbers behind `upper`.
    pub clique_numbers: Vec<usize>,
    /// Largest uniform weight in TH(G) = θ(G)/n.
    pub theta_uniform: f64,
    /// n = 1 lower chain value: largest uniform weight in the classical set,
    /// α/|V| (for self-complementary G this equals the abl(QSTAB) bound).
    pub lower: f64,
    pub self_complementary: bool,
    pub chain_ok: bool,
}

/// Uniform-ray sandwich l_1 ≤ t ≤ u_n with u_n non-increasing, for a
/// vertex-transitive graph.
pub fn sandwich_report(g: &ExclusivityGraph, n_max: usize) -> Result<SandwichReport, ThetaError> {
    if !is_vertex_transitive(g)? {
        return Err(ThetaError::NotVertexTransitive);
    }
    let n = g.len();
    let ones = VertexWeights::uniform(n, 1.0);
    let mut upper = Vec::with_capacity(n_max);
    let mut clique_numbers = Vec::with_capacity(n_max);
    for copies in 1..=n_max {
        let power = crate::exgraph::or_power(g, copies)?;
        let w = VertexWeights::uniform(power.len(), 1.0);
        let omega = max_weight_clique(&power, &w).weight_sum.round() as usize;
        clique_numbers.push(omega);
        upper.push((omega as f64).powf(-1.0 / copies as f64));
    }
    let theta = max_linear_over_theta(g, ones.as_slice())?;
    let theta_uniform = theta / n as f64;
    let alpha = max_weight_clique(&complement(g), &ones).weight_sum.round() as usize;
    let lower = alpha as f64 / n as f64;
    let self_complementary = is_self_complementary(g)?.is_some();

    let tol = 1e-9;
    let mut chain_ok = lower <= theta_uniform + ANTIBLOCKER_TOL;
    for (k, &u) in upper.iter().enumerate() {
        chain_ok &= theta_uniform <= u + ANTIBLOCKER_TOL;
        if k > 0 {
            chain_ok &= u <= upper[k - 1] + tol;
        }
    }
    Ok(SandwichReport {
        upper,
        clique_numbers,
        theta_uniform,
        lower,
        self_complementary,
        chain_ok,
    })
}

/// Vertex transitivity: an automorphism moving vertex 0 to every other
/// vertex exists.
pub fn is_vertex_transitive(g: &ExclusivityGraph) -> Result<bool, IsoError> {
    for target in 1..g.len() {
        if crate::exgraph::iso_with_seed(g, g, &[(0, target)])?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
