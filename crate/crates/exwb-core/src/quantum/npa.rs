//! Moment-matrix relaxation for constraint (C): one projector per
//! (measurement, outcome) across all contexts, idempotence, orthogonality,
//! completeness (via the reduced operator set) and compatibility
//! commutation. Infeasibility of the relaxation certifies that no projective
//! realization in any dimension reproduces the behaviour; feasibility at a
//! finite level proves nothing.
//!
//! Words use one projector symbol per (measurement, non-last outcome).
//! The word list at level k holds all canonical words of length ≤ k plus the
//! context-moment words (products over subsets of each maximal context), so
//! level 1 is the "1 + context moments" relaxation.

use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::numerics::{
    min_eigenvalue_symmetric, solve_sdp_feasibility, sym_from_entries, SdpFeasibility,
    SemidefiniteProgram, SymMatrix,
};
use crate::scenario::{joint_index, marginalize, Behaviour, Context, Scenario};

use super::QuantumError;

#[derive(Debug, Error)]
pub enum NpaError {
    #[error("relaxation level {0} unsupported; use 1 or 2")]
    BadLevel(usize),
}

/// Dual certificate of relaxation infeasibility: Σ y_k A_k ⪰ 0 with
/// b·y ≤ −margin over the deterministic constraint system of
/// [`npa_constraints`].
#[derive(Debug, Clone, Serialize)]
pub struct NpaCertificate {
    pub level: usize,
    pub dual: Vec<f64>,
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub enum NpaOutcome {
    /// A PSD moment matrix compatible with the behaviour was found.
    Feasible { moment_matrix: Vec<Vec<f64>> },
    Infeasible { certificate: NpaCertificate },
    Inconclusive { reason: String },
}

/// Projector symbol: (measurement index, outcome < last).
type Symbol = (usize, usize);
type Word = Vec<Symbol>;

/// Canonical form under idempotence, same-measurement orthogonality and
/// compatibility commutation; `None` encodes the zero operator.
fn canonicalize(s: &Scenario, word: &[Symbol]) -> Option<Word> {
    let mut w: Word = word.to_vec();
    loop {
        let mut changed = false;
        // Adjacent same-measurement reductions.
        let mut k = 0;
        while k + 1 < w.len() {
            let (m1, a1) = w[k];
            let (m2, a2) = w[k + 1];
            if m1 == m2 {
                if a1 == a2 {
                    w.remove(k + 1);
                    changed = true;
                    continue;
                }
                return None;
            }
            k += 1;
        }
        // One bubble pass of commuting swaps toward sorted order.
        let mut k = 0;
        while k + 1 < w.len() {
            let (m1, a1) = w[k];
            let (m2, a2) = w[k + 1];
            if (m1, a1) > (m2, a2) && s.compatible(m1, m2) {
                w.swap(k, k + 1);
                changed = true;
            }
            k += 1;
        }
        if !changed {
            return Some(w);
        }
    }
}

fn reversed(word: &[Symbol]) -> Word {
    word.iter().rev().copied().collect()
}

/// Moment key: canonical form of the word, identified with its reverse
/// (real moment matrices carry only the real part, which the two share).
fn moment_key(s: &Scenario, word: &[Symbol]) -> Option<Word> {
    let a = canonicalize(s, word)?;
    let b = canonicalize(s, &reversed(&a)).expect("reverse of nonzero word is nonzero");
    Some(a.min(b))
}

/// Word list: identity, all canonical words of length ≤ level, plus every
/// context-moment word (subset of a maximal context, reduced outcomes).
fn word_list(s: &Scenario, level: usize) -> Vec<Word> {
    let symbols: Vec<Symbol> = (0..s.len())
        .flat_map(|m| (0..s.outcomes(m) - 1).map(move |a| (m, a)))
        .collect();
    let mut words: Vec<Word> = vec![Vec::new()];
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..level {
        let mut next = Vec::new();
        for w in &frontier {
            for &sym in &symbols {
                let mut cand = w.clone();
                cand.push(sym);
                if let Some(c) = canonicalize(s, &cand) {
                    next.push(c);
                }
            }
        }
        next.sort();
        next.dedup();
        words.extend(next.iter().cloned());
        frontier = next;
    }
    // Context-moment words.
    for ctx in s.maximal_contexts() {
        let members = ctx.members();
        for mask in 1u32..(1 << members.len()) {
            let subset: Vec<usize> = members
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &m)| m)
                .collect();
            let dims: Vec<usize> = subset.iter().map(|&m| s.outcomes(m) - 1).collect();
            if dims.iter().any(|&d| d == 0) {
                continue;
            }
            let count: usize = dims.iter().product();
            for idx in 0..count {
                let outs = crate::scenario::joint_outcomes(&dims, idx);
                let word: Word = subset.iter().copied().zip(outs).collect();
                if let Some(c) = canonicalize(s, &word) {
                    words.push(c);
                }
            }
        }
    }
    words.sort();
    words.dedup();
    words
}

/// Probability of a word whose symbols form a clique of distinct compatible
/// measurements: the joint marginal of the behaviour.
fn word_probability(b: &Behaviour, word: &[Symbol]) -> Option<f64> {
    if word.is_empty() {
        return Some(1.0);
    }
    let s = b.scenario();
    let members: Vec<usize> = word.iter().map(|&(m, _)| m).collect();
    for (i, &m1) in members.iter().enumerate() {
        for &m2 in &members[i + 1..] {
            if m1 == m2 || !s.compatible(m1, m2) {
                return None;
            }
        }
    }
    let ctx = Context::new(s, &members).ok()?;
    let table = marginalize(b, &ctx, &ctx).ok()?;
    // Context members are sorted; realign the word's outcomes.
    let mut outs = vec![0usize; ctx.len()];
    for &(m, a) in word {
        let pos = ctx.members().binary_search(&m).unwrap();
        outs[pos] = a;
    }
    let dims = ctx.outcome_dims(s);
    Some(table[joint_index(&dims, &outs)])
}

/// Deterministic constraint system of the relaxation: the moment matrix over
/// the word list with entries fixed to behaviour moments, zero words pinned
/// to 0 and entries sharing a moment key tied together.
pub fn npa_constraints(
    s: &Scenario,
    b: &Behaviour,
    level: usize,
) -> (usize, Vec<(SymMatrix, f64)>) {
    let words = word_list(s, level);
    let n = words.len();
    let mut constraints: Vec<(SymMatrix, f64)> = Vec::new();
    let mut reps: BTreeMap<Word, (usize, usize)> = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let mut prod = reversed(&words[i]);
            prod.extend(words[j].iter().copied());
            match moment_key(s, &prod) {
                None => {
                    constraints.push((sym_from_entries(n, &[(i, j, half(i, j))]), 0.0));
                }
                Some(key) => {
                    if let Some(p) = word_probability(b, &key) {
                        constraints.push((sym_from_entries(n, &[(i, j, half(i, j))]), p));
                    } else if let Some(&(ri, rj)) = reps.get(&key) {
                        constraints.push((
                            sym_from_entries(n, &[(i, j, half(i, j)), (ri, rj, -half(ri, rj))]),
                            0.0,
                        ));
                    } else {
                        reps.insert(key, (i, j));
                    }
                }
            }
        }
    }
    (n, constraints)
}

fn half(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.5
    }
}

/// Decide whether the level-k relaxation admits a PSD moment matrix for the
/// behaviour. `Infeasible` certifies non-quantumness (no realization in any
/// dimension); `Feasible` is not a proof of quantumness.
pub fn npa_infeasibility(
    s: &Scenario,
    b: &Behaviour,
    level: usize,
) -> Result<NpaOutcome, QuantumError> {
    if !(1..=2).contains(&level) {
        return Err(QuantumError::UnsupportedScenario {
            reason: NpaError::BadLevel(level).to_string(),
        });
    }
    let (n, constraints) = npa_constraints(s, b, level);
    let sdp = SemidefiniteProgram::feasibility(n, constraints);
    let feas = solve_sdp_feasibility(&sdp).map_err(|e| QuantumError::UnsupportedScenario {
        reason: format!("sdp error: {e}"),
    })?;
    Ok(match feas {
        SdpFeasibility::Feasible { x, .. } => {
            let gamma = (0..n).map(|r| (0..n).map(|c| x[(r, c)]).collect()).collect();
            NpaOutcome::Feasible { moment_matrix: gamma }
        }
        SdpFeasibility::Infeasible { dual, margin } => NpaOutcome::Infeasible {
            certificate: NpaCertificate { level, dual, margin },
        },
        SdpFeasibility::Inconclusive { reason } => NpaOutcome::Inconclusive { reason },
    })
}

/// Independent re-check of an infeasibility certificate: rebuild the
/// constraint system, form Z = Σ y_k A_k and verify Z ⪰ −1e-7 (Jacobi route)
/// with b·y < −1e-7.
pub fn verify_npa_certificate(
    s: &Scenario,
    b: &Behaviour,
    cert: &NpaCertificate,
) -> bool {
    let (n, constraints) = npa_constraints(s, b, cert.level);
    if cert.dual.len() != constraints.len() {
        return false;
    }
    let mut z = DMatrix::<f64>::zeros(n, n);
    let mut by = 0.0;
    for ((a, bk), &y) in constraints.iter().zip(&cert.dual) {
        z += a * y;
        by += bk * y;
    }
    min_eigenvalue_symmetric(&z) >= -1e-7 && by <= -1e-7
}
