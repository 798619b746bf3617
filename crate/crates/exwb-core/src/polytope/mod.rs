//! Combinatorial membership: cliques, independent sets, QSTAB, STAB, E^n,
//! the local polytope, and antiblocker queries — all with re-checkable
//! certificates.
//!
//! The exclusivity-principle test over n copies is decided by an exact
//! branch-and-bound max-weight clique search on the OR power (weight-sum
//! pruning bound, deterministic tie-break); zero-weight vertices are removed
//! before the power is formed.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::exgraph::{
    or_power_capped, tensor_weights, ExclusivityGraph, ExgraphError, VertexWeights,
    DEFAULT_OR_CAP,
};
use crate::numerics::{solve_lp, ConstraintOp, LinearProgram, LpStatus};
use crate::scenario::{joint_index, joint_outcomes, Behaviour};

/// Absolute tolerance for the "≤ 1" exclusivity bound.
pub const EP_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("independent-set enumeration capped at {cap} vertices; graph has {n}")]
    IndependentSetCap { n: usize, cap: usize },
    #[error("{count} deterministic assignments exceed the cap {cap}")]
    AssignmentCap { count: usize, cap: usize },
    #[error("weights have length {got}, expected {expected}")]
    WeightDimension { got: usize, expected: usize },
    #[error(transparent)]
    Exgraph(#[from] ExgraphError),
    #[error("linear program failed: {0}")]
    Lp(String),
}

/// A clique together with its weight sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueWitness {
    pub vertices: Vec<usize>,
    pub weight_sum: f64,
}

/// Exportable certificate attached to a membership verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    /// A set of pairwise exclusive events (n-tuples over the base graph for
    /// n-copy tests) whose weights sum past 1.
    CliqueViolation { copies: usize, clique: Vec<Vec<usize>>, weight_sum: f64 },
    /// The maximising clique found when the bound holds (evidence, not proof;
    /// exactness comes from the search).
    EpBound { copies: usize, clique: Vec<Vec<usize>>, weight_sum: f64 },
    /// Convex-combination coefficients over named vertex sets / assignments.
    Mixture { terms: Vec<(Vec<usize>, f64)> },
    /// A hyperplane with `value = a·w > bound ≥ max over the polytope`.
    SeparatingInequality { coeffs: Vec<f64>, bound: f64, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub member: bool,
    pub certificate: Certificate,
}

// ---------------------------------------------------------------------------
// Max-weight clique.
// ---------------------------------------------------------------------------

struct CliqueSearch<'a> {
    g: &'a ExclusivityGraph,
    /// order[k] = original vertex explored at rank k (descending weight).
    order: Vec<usize>,
    weights: Vec<f64>,
    words: usize,
    /// adjacency between ranks.
    adj: Vec<u64>,
    best_sum: f64,
    best: Vec<usize>,
    cutoff: Option<f64>,
    hit_cutoff: bool,
}

impl<'a> CliqueSearch<'a> {
    fn new(g: &'a ExclusivityGraph, w: &[f64], cutoff: Option<f64>) -> Self {
        let mut order: Vec<usize> = (0..g.len()).filter(|&v| w[v] > 0.0).collect();
        order.sort_by(|&a, &b| {
            w[b].partial_cmp(&w[a]).unwrap().then_with(|| a.cmp(&b))
        });
        let m = order.len();
        let words = m.div_ceil(64);
        let mut adj = vec![0u64; m * words];
        for i in 0..m {
            for j in 0..m {
                if g.adjacent(order[i], order[j]) {
                    adj[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        let weights = order.iter().map(|&v| w[v]).collect();
        CliqueSearch {
            g,
            order,
            weights,
            words,
            adj,
            best_sum: 0.0,
            best: Vec::new(),
            cutoff,
            hit_cutoff: false,
        }
    }

    fn run(mut self) -> (CliqueWitness, bool) {
        let m = self.order.len();
        let mut cand = vec![0u64; self.words];
        for r in 0..m {
            cand[r / 64] |= 1 << (r % 64);
        }
        let mut chosen = Vec::new();
        self.expand(&mut chosen, cand, 0.0);
        let mut vertices: Vec<usize> = self.best.iter().map(|&r| self.order[r]).collect();
        vertices.sort_unstable();
        (CliqueWitness { vertices, weight_sum: self.best_sum }, self.hit_cutoff)
    }

    fn consider(&mut self, chosen: &[usize], sum: f64) {
        let better = sum > self.best_sum
            || (sum == self.best_sum && {
                let mut cur: Vec<usize> = chosen.iter().map(|&r| self.order[r]).collect();
                cur.sort_unstable();
                let mut best: Vec<usize> = self.best.iter().map(|&r| self.order[r]).collect();
                best.sort_unstable();
                cur < best
            });
        if better {
            self.best_sum = sum;
            self.best = chosen.to_vec();
            if let Some(c) = self.cutoff {
                if self.best_sum > c {
                    self.hit_cutoff = true;
                }
            }
        }
    }

    fn expand(&mut self, chosen: &mut Vec<usize>, mut cand: Vec<u64>, sum: f64) {
        if self.hit_cutoff {
            return;
        }
        self.consider(chosen, sum);
        let mut cand_sum: f64 = iter_bits(&cand).map(|r| self.weights[r]).sum();
        while let Some(v) = first_bit(&cand) {
            if sum + cand_sum <= self.best_sum + 1e-15 || self.hit_cutoff {
                return;
            }
            clear_bit(&mut cand, v);
            cand_sum -= self.weights[v];
            // Branch: include v.
            let mut next: Vec<u64> = (0..self.words)
                .map(|k| cand[k] & self.adj[v * self.words + k])
                .collect();
            // Only ranks after v remain viable because cand already excludes
            // earlier ones; mask is implicit.
            chosen.push(v);
            self.expand(chosen, std::mem::take(&mut next), sum + self.weights[v]);
            chosen.pop();
        }
        let _ = self.g;
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            }
        })
    })
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
}

fn clear_bit(words: &mut [u64], i: usize) {
    words[i / 64] &= !(1 << (i % 64));
}

/// Exact max-weight clique (branch and bound, weight-sum pruning bound,
/// deterministic lexicographic tie-break). Zero-weight vertices are dropped;
/// the empty clique (weight 0) is admissible.
pub fn max_weight_clique(g: &ExclusivityGraph, w: &VertexWeights) -> CliqueWitness {
    assert_eq!(w.len(), g.len(), "one weight per vertex");
    let (witness, _) = CliqueSearch::new(g, w.as_slice(), None).run();
    witness
}

// ---------------------------------------------------------------------------
// Exclusivity principle over n copies; QSTAB and E^n.
// ---------------------------------------------------------------------------

/// Does `w` satisfy the exclusivity principle over `n` independent copies?
/// Decided exactly: max-weight clique of the n-fold OR power (zero-weight
/// vertices removed first) compared against 1 + [`EP_TOL`]. The search stops
/// early once a violating clique is found; the violation certificate is that
/// clique mapped back to n-tuples of base vertices.
pub fn satisfies_ep(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    n: usize,
) -> Result<MembershipVerdict, PolytopeError> {
    satisfies_ep_capped(g, w, n, DEFAULT_OR_CAP)
}

pub fn satisfies_ep_capped(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    n: usize,
    cap: usize,
) -> Result<MembershipVerdict, PolytopeError> {
    if w.len() != g.len() {
        return Err(PolytopeError::WeightDimension { got: w.len(), expected: g.len() });
    }
    let support: Vec<usize> = (0..g.len()).filter(|&v| w[v] > 0.0).collect();
    let sg = g.induced(&support);
    let sw = VertexWeights::new(support.iter().map(|&v| w[v]).collect())
        .expect("weights stay in range");
    let power = or_power_capped(&sg, n, cap)?;
    let pw = tensor_weights(&sw, n);
    let (witness, _) = CliqueSearch::new(&power, pw.as_slice(), Some(1.0 + EP_TOL)).run();

    // Map power vertices back to n-tuples over the original graph.
    let m = sg.len().max(1);
    let clique: Vec<Vec<usize>> = witness
        .vertices
        .iter()
        .map(|&u| {
            let mut idx = u;
            let mut tuple = vec![0usize; n];
            for k in (0..n).rev() {
                tuple[k] = support[idx % m];
                idx /= m;
            }
            tuple
        })
        .collect();
    let member = witness.weight_sum <= 1.0 + EP_TOL;
    let certificate = if member {
        Certificate::EpBound { copies: n, clique, weight_sum: witness.weight_sum }
    } else {
        Certificate::CliqueViolation { copies: n, clique, weight_sum: witness.weight_sum }
    };
    Ok(MembershipVerdict { member, certificate })
}

/// Single-copy exclusivity principle = membership in QSTAB(G).
pub fn in_qstab(g: &ExclusivityGraph, w: &VertexWeights) -> Result<MembershipVerdict, PolytopeError> {
    satisfies_ep(g, w, 1)
}

/// E^n(G): w ∈ E^n iff w^{⊗n} ∈ QSTAB(G^{∗n}).
pub fn in_e_n(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    n: usize,
) -> Result<MembershipVerdict, PolytopeError> {
    satisfies_ep(g, w, n)
}

/// Re-check a clique-violation certificate from scratch: tuples distinct and
/// pairwise exclusive under the OR rule, weight product-sum > 1 + tol.
pub fn verify_clique_violation(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    cert: &Certificate,
) -> bool {
    let Certificate::CliqueViolation { copies, clique, weight_sum } = cert else {
        return false;
    };
    match recheck_tuple_clique(g, w, *copies, clique) {
        Some(sum) => (sum - weight_sum).abs() <= 1e-9 && sum > 1.0 + EP_TOL,
        None => false,
    }
}

/// Re-check either EP certificate kind: a violation must be a genuine clique
/// with weight sum > 1 + tol; a bound witness must be a genuine clique whose
/// weight sum matches and stays ≤ 1 + tol.
pub fn verify_ep_certificate(g: &ExclusivityGraph, w: &VertexWeights, cert: &Certificate) -> bool {
    match cert {
        Certificate::CliqueViolation { .. } => verify_clique_violation(g, w, cert),
        Certificate::EpBound { copies, clique, weight_sum } => {
            match recheck_tuple_clique(g, w, *copies, clique) {
                Some(sum) => (sum - weight_sum).abs() <= 1e-9 && sum <= 1.0 + EP_TOL,
                None => false,
            }
        }
        _ => false,
    }
}

/// Pairwise exclusivity and weight sum of a set of n-tuples; None if the
/// tuples are not a clique of the OR power.
fn recheck_tuple_clique(
    g: &ExclusivityGraph,
    w: &VertexWeights,
    copies: usize,
    clique: &[Vec<usize>],
) -> Option<f64> {
    if clique.iter().any(|t| t.len() != copies || t.iter().any(|&v| v >= g.len())) {
        return None;
    }
    for (i, a) in clique.iter().enumerate() {
        for b in clique.iter().skip(i + 1) {
            if a == b {
                return None;
            }
            let exclusive = a.iter().zip(b).any(|(&u, &v)| g.adjacent(u, v));
            if !exclusive {
                return None;
            }
        }
    }
    Some(clique.iter().map(|t| t.iter().map(|&v| w[v]).product::<f64>()).sum())
}

// ---------------------------------------------------------------------------
// Independent sets and STAB.
// ---------------------------------------------------------------------------

pub const INDEPENDENT_SET_CAP: usize = 32;

/// All independent sets including the empty set, in lexicographic order of
/// their sorted vertex lists.
pub fn enumerate_independent_sets(
    g: &ExclusivityGraph,
) -> Result<Vec<Vec<usize>>, PolytopeError> {
    enumerate_independent_sets_capped(g, INDEPENDENT_SET_CAP)
}

pub fn enumerate_independent_sets_capped(
    g: &ExclusivityGraph,
    cap: usize,
) -> Result<Vec<Vec<usize>>, PolytopeError> {
    if g.len() > cap {
        return Err(PolytopeError::IndependentSetCap { n: g.len(), cap });
    }
    let mut out = vec![Vec::new()];
    let mut current = Vec::new();
    fn dfs(
        g: &ExclusivityGraph,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for v in start..g.len() {
            if current.iter().all(|&u| !g.adjacent(u, v)) {
                current.push(v);
                out.push(current.clone());
                dfs(g, v + 1, current, out);
                current.pop();
            }
        }
    }
    dfs(g, 0, &mut current, &mut out);
    Ok(out)
}

/// STAB(G) membership: is w a convex combination of characteristic vectors
/// of independent sets (the empty set absorbing slack)? LP feasibility; the
/// certificate is the mixture or a separating inequality from the Farkas ray.
pub fn in_stab(g: &ExclusivityGraph, w: &VertexWeights) -> Result<MembershipVerdict, PolytopeError> {
    if w.len() != g.len() {
        return Err(PolytopeError::WeightDimension { got: w.len(), expected: g.len() });
    }
    let sets = enumerate_independent_sets(g)?;
    let n = g.len();
    let cols = sets.len();
    let mut lp = LinearProgram::new(false, vec![0.0; cols]);
    for i in 0..n {
        let coeffs: Vec<f64> =
            sets.iter().map(|s| if s.contains(&i) { 1.0 } else { 0.0 }).collect();
        lp.push(coeffs, ConstraintOp::Eq, w[i]);
    }
    lp.push(vec![1.0; cols], ConstraintOp::Eq, 1.0);
    let r = solve_lp(&lp).map_err(|e| PolytopeError::Lp(e.to_string()))?;
    match r.status {
        LpStatus::Optimal => {
            let terms: Vec<(Vec<usize>, f64)> = sets
                .iter()
                .zip(&r.x)
                .filter(|(_, &c)| c > 1e-12)
                .map(|(s, &c)| (s.clone(), c))
                .collect();
            Ok(MembershipVerdict { member: true, certificate: Certificate::Mixture { terms } })
        }
        LpStatus::Infeasible => {
            let y = r.farkas.ok_or_else(|| {
                PolytopeError::Lp("infeasible without Farkas certificate".into())
            })?;
            let coeffs: Vec<f64> = y[..n].to_vec();
            let bound = sets
                .iter()
                .map(|s| s.iter().map(|&v| coeffs[v]).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            let value: f64 = coeffs.iter().zip(w.as_slice()).map(|(a, b)| a * b).sum();
            Ok(MembershipVerdict {
                member: false,
                certificate: Certificate::SeparatingInequality { coeffs, bound, value },
            })
        }
        LpStatus::Unbounded => Err(PolytopeError::Lp("membership LP unbounded".into())),
    }
}

/// Re-check a STAB mixture certificate: coefficients nonnegative, sum 1,
/// sets independent, combination reproduces w.
pub fn verify_stab_mixture(g: &ExclusivityGraph, w: &VertexWeights, cert: &Certificate) -> bool {
    let Certificate::Mixture { terms } = cert else { return false };
    let mut total = 0.0;
    let mut combo = vec![0.0; g.len()];
    for (set, c) in terms {
        if *c < -1e-12 {
            return false;
        }
        for (i, &u) in set.iter().enumerate() {
            if u >= g.len() {
                return false;
            }
            for &v in &set[i + 1..] {
                if g.adjacent(u, v) {
                    return false;
                }
            }
            combo[u] += c;
        }
        total += c;
    }
    (total - 1.0).abs() <= 1e-7
        && combo.iter().zip(w.as_slice()).all(|(a, b)| (a - b).abs() <= 1e-7)
}

// ---------------------------------------------------------------------------
// Local polytope.
// ---------------------------------------------------------------------------

pub const ASSIGNMENT_CAP: usize = 1_000_000;

/// Stacked behaviour vectors of all global deterministic assignments, in
/// lexicographic assignment order. Each assignment fixes one outcome per
/// measurement.
pub fn deterministic_behaviours(b: &Behaviour) -> Result<Vec<Vec<f64>>, PolytopeError> {
    let s = b.scenario();
    let dims: Vec<usize> = (0..s.len()).map(|m| s.outcomes(m)).collect();
    let count: usize = dims.iter().product();
    if count > ASSIGNMENT_CAP {
        return Err(PolytopeError::AssignmentCap { count, cap: ASSIGNMENT_CAP });
    }
    let contexts = s.maximal_contexts();
    let stacked_len: usize = contexts.iter().map(|c| c.table_len(s)).sum();
    let mut out = Vec::with_capacity(count);
    for a_idx in 0..count {
        let assignment = joint_outcomes(&dims, a_idx);
        let mut v = Vec::with_capacity(stacked_len);
        for ctx in &contexts {
            let cdims = ctx.outcome_dims(s);
            let outs: Vec<usize> = ctx.members().iter().map(|&m| assignment[m]).collect();
            let hit = joint_index(&cdims, &outs);
            let len: usize = cdims.iter().product();
            for k in 0..len {
                v.push(if k == hit { 1.0 } else { 0.0 });
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Local/noncontextual polytope membership: is the stacked probability
/// vector a convex combination of deterministic-assignment behaviours?
///
/// Non-membership returns the most violated normalized separating inequality
/// (coefficients in [−1,1], zero-sum per context block), found by a second
/// LP over the certificate space.
pub fn in_local_polytope(b: &Behaviour) -> Result<MembershipVerdict, PolytopeError> {
    let dets = deterministic_behaviours(b)?;
    let p = b.stacked();
    let dim = p.len();
    let cols = dets.len();
    let mut lp = LinearProgram::new(false, vec![0.0; cols]);
    for i in 0..dim {
        let coeffs: Vec<f64> = dets.iter().map(|d| d[i]).collect();
        lp.push(coeffs, ConstraintOp::Eq, p[i]);
    }
    lp.push(vec![1.0; cols], ConstraintOp::Eq, 1.0);
    let r = solve_lp(&lp).map_err(|e| PolytopeError::Lp(e.to_string()))?;
    match r.status {
        LpStatus::Optimal => {
            let s = b.scenario();
            let dims: Vec<usize> = (0..s.len()).map(|m| s.outcomes(m)).collect();
            let terms: Vec<(Vec<usize>, f64)> = r
                .x
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 1e-12)
                .map(|(idx, &c)| (joint_outcomes(&dims, idx), c))
                .collect();
            Ok(MembershipVerdict { member: true, certificate: Certificate::Mixture { terms } })
        }
        LpStatus::Infeasible => {
            let cert = separating_inequality(b, &dets, &p)?;
            Ok(MembershipVerdict { member: false, certificate: cert })
        }
        LpStatus::Unbounded => Err(PolytopeError::Lp("membership LP unbounded".into())),
    }
}

/// Most violated separating inequality with coefficients in [−1,1] and
/// zero-sum over each context block (offsets along normalization directions
/// carry no information).
fn separating_inequality(
    b: &Behaviour,
    dets: &[Vec<f64>],
    p: &[f64],
) -> Result<Certificate, PolytopeError> {
    let s = b.scenario();
    let dim = p.len();
    // Variables: a_0..a_{dim-1}, t. Maximize a·p − t.
    let mut objective = p.to_vec();
    objective.push(-1.0);
    let mut lp = LinearProgram::new(true, objective);
    lp.bounds = vec![(-1.0, 1.0); dim];
    lp.bounds.push((f64::NEG_INFINITY, f64::INFINITY));
    for d in dets {
        let mut coeffs = d.clone();
        coeffs.push(-1.0);
        lp.push(coeffs, ConstraintOp::Le, 0.0);
    }
    let mut offset = 0;
    for ctx in s.maximal_contexts() {
        let len = ctx.table_len(s);
        let mut coeffs = vec![0.0; dim + 1];
        for k in 0..len {
            coeffs[offset + k] = 1.0;
        }
        lp.push(coeffs, ConstraintOp::Eq, 0.0);
        offset += len;
    }
    let r = solve_lp(&lp).map_err(|e| PolytopeError::Lp(e.to_string()))?;
    if r.status != LpStatus::Optimal {
        return Err(PolytopeError::Lp("separating-inequality LP not optimal".into()));
    }
    let coeffs = r.x[..dim].to_vec();
    let bound = dets
        .iter()
        .map(|d| d.iter().zip(&coeffs).map(|(x, a)| x * a).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let value: f64 = p.iter().zip(&coeffs).map(|(x, a)| x * a).sum();
    Ok(Certificate::SeparatingInequality { coeffs, bound, value })
}

/// Re-check a local-polytope mixture: nonnegative, sums to one, and the
/// deterministic behaviours it names combine to the behaviour's stacked
/// vector.
pub fn verify_local_mixture(b: &Behaviour, cert: &Certificate) -> bool {
    let Certificate::Mixture { terms } = cert else { return false };
    let s = b.scenario();
    let dims: Vec<usize> = (0..s.len()).map(|m| s.outcomes(m)).collect();
    let p = b.stacked();
    let mut combo = vec![0.0; p.len()];
    let mut total = 0.0;
    let contexts = s.maximal_contexts();
    for (assignment, c) in terms {
        if *c < -1e-12 || assignment.len() != s.len() {
            return false;
        }
        if assignment.iter().enumerate().any(|(m, &a)| a >= dims[m]) {
            return false;
        }
        total += c;
        let mut offset = 0;
        for ctx in &contexts {
            let cdims = ctx.outcome_dims(s);
            let outs: Vec<usize> = ctx.members().iter().map(|&m| assignment[m]).collect();
            combo[offset + joint_index(&cdims, &outs)] += c;
            offset += ctx.table_len(s);
        }
    }
    (total - 1.0).abs() <= 1e-7 && combo.iter().zip(&p).all(|(a, b)| (a - b).abs() <= 1e-7)
}

/// Re-check a separating inequality against explicitly enumerated vertices.
pub fn verify_separating_inequality(vertices: &[Vec<f64>], point: &[f64], cert: &Certificate) -> bool {
    let Certificate::SeparatingInequality { coeffs, bound, value } = cert else {
        return false;
    };
    let true_bound = vertices
        .iter()
        .map(|v| v.iter().zip(coeffs).map(|(x, a)| x * a).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let true_value: f64 = point.iter().zip(coeffs).map(|(x, a)| x * a).sum();
    (true_bound - bound).abs() <= 1e-7
        && (true_value - value).abs() <= 1e-7
        && true_value > true_bound + EP_TOL
}

// ---------------------------------------------------------------------------
// Antiblocker queries.
// ---------------------------------------------------------------------------

/// Polyhedral sets supported by [`antiblocker_max`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolytopeSet {
    QStab,
    Stab,
}

/// Maximal cliques of a graph (Bron-Kerbosch with pivoting), sorted.
pub fn maximal_cliques(g: &ExclusivityGraph) -> Vec<Vec<usize>> {
    fn bk(
        g: &ExclusivityGraph,
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return;
        }
        // Pivot: vertex of P ∪ X with most neighbours in P.
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| (p.iter().filter(|&&v| g.adjacent(u, v)).count(), usize::MAX - u))
            .unwrap();
        let branch: Vec<usize> = p.iter().copied().filter(|&v| !g.adjacent(pivot, v)).collect();
        let mut p = p;
        let mut x = x;
        for v in branch {
            let np: Vec<usize> = p.iter().copied().filter(|&u| g.adjacent(v, u)).collect();
            let nx: Vec<usize> = x.iter().copied().filter(|&u| g.adjacent(v, u)).collect();
            r.push(v);
            bk(g, r, np, nx, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    let mut r = Vec::new();
    bk(g, &mut r, (0..g.len()).collect(), Vec::new(), &mut out);
    out.sort();
    out
}

/// max q·p over the chosen polytope. q ∈ abl(P) iff the value is ≤ 1.
///
/// QSTAB: LP over the maximal-clique constraints. STAB: exact maximum over
/// the polytope's vertices (characteristic vectors of independent sets).
pub fn antiblocker_max(
    set: PolytopeSet,
    g: &ExclusivityGraph,
    q: &VertexWeights,
) -> Result<f64, PolytopeError> {
    if q.len() != g.len() {
        return Err(PolytopeError::WeightDimension { got: q.len(), expected: g.len() });
    }
    match set {
        PolytopeSet::Stab => {
            let sets = enumerate_independent_sets(g)?;
            Ok(sets
                .iter()
                .map(|s| s.iter().map(|&v| q[v]).sum::<f64>())
                .fold(0.0, f64::max))
        }
        PolytopeSet::QStab => {
            let n = g.len();
            let mut lp = LinearProgram::new(true, q.as_slice().to_vec());
            lp.bounds = vec![(0.0, 1.0); n];
            for clique in maximal_cliques(g) {
                let mut coeffs = vec![0.0; n];
                for &v in &clique {
                    coeffs[v] = 1.0;
                }
                lp.push(coeffs, ConstraintOp::Le, 1.0);
            }
            let r = solve_lp(&lp).map_err(|e| PolytopeError::Lp(e.to_string()))?;
            if r.status != LpStatus::Optimal {
                return Err(PolytopeError::Lp("antiblocker LP not optimal".into()));
            }
            Ok(r.value)
        }
    }
}

/// Certificates serialized for the CLI: verdict plus certificate payload.
pub fn verdict_to_json(v: &MembershipVerdict) -> serde_json::Value {
    serde_json::to_value(v).expect("verdict serializes")
}

/// Stacked-vector index map for a behaviour: context key -> (offset, len).
pub fn stacked_layout(b: &Behaviour) -> BTreeMap<String, (usize, usize)> {
    let s = b.scenario();
    let mut out = BTreeMap::new();
    let mut offset = 0;
    for ctx in s.maximal_contexts() {
        let len = ctx.table_len(s);
        out.insert(ctx.key(s), (offset, len));
        offset += len;
    }
    out
}
