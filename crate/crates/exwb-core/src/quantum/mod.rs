//! Projective quantum realizations of scenarios.
//!
//! A realization is a Hilbert-space dimension, a unit state vector and one
//! projector per (measurement, outcome). Validation checks the projector
//! axioms (idempotence, mutual orthogonality, completeness) and commutation
//! between compatible measurements; behaviours are evaluated as squared
//! norms of projected states, which agrees with the usual post-measurement
//! normalization wherever the latter is defined and stays finite on
//! zero-probability branches.

mod npa;
mod seesaw;

pub use npa::{npa_constraints, npa_infeasibility, verify_npa_certificate, NpaCertificate, NpaOutcome};
pub use seesaw::{seesaw_fit, SeesawOptions, SeesawResult};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::scenario::{chsh_scenario, joint_outcomes, Behaviour, Scenario, ScenarioError};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("state vector has length {got}, expected {expected}")]
    StateDimension { got: usize, expected: usize },
    #[error("projector for ({id}, {outcome}) has shape {got}x{got2}, expected {expected}")]
    ProjectorDimension { id: String, outcome: usize, got: usize, got2: usize, expected: usize },
    #[error("missing projector for measurement `{id}` outcome {outcome}")]
    MissingProjector { id: String, outcome: usize },
    #[error("realization failed validation: worst residual {residual:.3e}")]
    ValidationFailed { residual: f64 },
    #[error("invalid coarse-graining partition for `{id}`: {reason}")]
    InvalidPartition { id: String, reason: String },
    #[error("measurement `{id}` has {outcomes} outcomes; partition enumeration capped at {cap}")]
    PartitionCapExceeded { id: String, outcomes: usize, cap: usize },
    #[error("scenario error: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("see-saw supports complete-multipartite compatibility only: {reason}")]
    UnsupportedScenario { reason: String },
}

/// A projective realization: dimension, unit state, and one projector per
/// (measurement id, outcome index).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RealizationJson", into = "RealizationJson")]
pub struct Realization {
    pub dim: usize,
    pub state: CVector,
    pub projectors: BTreeMap<(String, usize), CMatrix>,
}

#[derive(Serialize, Deserialize, Clone)]
struct RealizationJson {
    d: usize,
    /// Unit state as [re, im] pairs.
    state: Vec<[f64; 2]>,
    /// "id:outcome" -> row-major matrix of [re, im] pairs.
    projectors: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
}

impl TryFrom<RealizationJson> for Realization {
    type Error = String;
    fn try_from(j: RealizationJson) -> Result<Self, Self::Error> {
        let d = j.d;
        if j.state.len() != d {
            return Err(format!("state length {} != d {}", j.state.len(), d));
        }
        let state = CVector::from_iterator(d, j.state.iter().map(|p| Complex64::new(p[0], p[1])));
        let mut projectors = BTreeMap::new();
        for (key, rows) in j.projectors {
            let (id, outcome) = key
                .rsplit_once(':')
                .ok_or_else(|| format!("bad projector key `{key}`; expected id:outcome"))?;
            let outcome: usize =
                outcome.parse().map_err(|_| format!("bad outcome in key `{key}`"))?;
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(format!("projector `{key}` is not {d}x{d}"));
            }
            let m = CMatrix::from_fn(d, d, |i, k| Complex64::new(rows[i][k][0], rows[i][k][1]));
            projectors.insert((id.to_string(), outcome), m);
        }
        Ok(Realization { dim: d, state, projectors })
    }
}

impl From<Realization> for RealizationJson {
    fn from(r: Realization) -> Self {
        let state = r.state.iter().map(|c| [c.re, c.im]).collect();
        let projectors = r
            .projectors
            .iter()
            .map(|((id, outcome), m)| {
                let rows = (0..r.dim)
                    .map(|i| (0..r.dim).map(|k| [m[(i, k)].re, m[(i, k)].im]).collect())
                    .collect();
                (format!("{id}:{outcome}"), rows)
            })
            .collect();
        RealizationJson { d: r.dim, state, projectors }
    }
}

impl Realization {
    pub fn projector(&self, id: &str, outcome: usize) -> Option<&CMatrix> {
        self.projectors.get(&(id.to_string(), outcome))
    }

    /// Number of outcomes stored for a measurement id.
    pub fn outcome_count(&self, id: &str) -> usize {
        self.projectors.keys().filter(|(m, _)| m == id).count()
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Residuals of the projective-measurement axioms.
#[derive(Debug, Clone, Serialize)]
pub struct RealizationReport {
    pub state_norm: f64,
    pub idempotence: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    pub commutation: f64,
    pub pass: bool,
}

impl RealizationReport {
    pub fn worst(&self) -> f64 {
        self.state_norm
            .max(self.idempotence)
            .max(self.orthogonality)
            .max(self.completeness)
            .max(self.commutation)
    }
}

pub const REALIZATION_TOL: f64 = 1e-8;

/// Check the projector axioms of `r` against scenario `s`: per measurement
/// E_a E_b = δ_ab E_a and Σ_a E_a = 1; commutation for compatible pairs;
/// unit state norm. Pass iff every residual ≤ 1e-8.
pub fn validate_realization(r: &Realization, s: &Scenario) -> Result<RealizationReport, QuantumError> {
    let d = r.dim;
    if r.state.len() != d {
        return Err(QuantumError::StateDimension { got: r.state.len(), expected: d });
    }
    for m in s.measurements() {
        for a in 0..m.outcomes {
            match r.projector(&m.id, a) {
                None => return Err(QuantumError::MissingProjector { id: m.id.clone(), outcome: a }),
                Some(e) => {
                    if e.nrows() != d || e.ncols() != d {
                        return Err(QuantumError::ProjectorDimension {
                            id: m.id.clone(),
                            outcome: a,
                            got: e.nrows(),
                            got2: e.ncols(),
                            expected: d,
                        });
                    }
                }
            }
        }
    }

    let state_norm = (r.state.norm() - 1.0).abs();
    let eye = CMatrix::identity(d, d);
    let mut idempotence = 0.0f64;
    let mut orthogonality = 0.0f64;
    let mut completeness = 0.0f64;
    for m in s.measurements() {
        let mut sum = CMatrix::zeros(d, d);
        for a in 0..m.outcomes {
            let e = r.projector(&m.id, a).unwrap();
            idempotence = idempotence.max(max_abs(&(e * e - e)));
            // Hermiticity folded into idempotence: a projector must equal its
            // own adjoint for E^2 = E with E = E† to define a measurement.
            idempotence = idempotence.max(max_abs(&(e.adjoint() - e)));
            sum += e;
            for b in (a + 1)..m.outcomes {
                let f = r.projector(&m.id, b).unwrap();
                orthogonality = orthogonality.max(max_abs(&(e * f)));
            }
        }
        completeness = completeness.max(max_abs(&(sum - &eye)));
    }
    let mut commutation = 0.0f64;
    for (i, j) in s.compatible_pairs() {
        for a in 0..s.outcomes(i) {
            for b in 0..s.outcomes(j) {
                let e = r.projector(s.id(i), a).unwrap();
                let f = r.projector(s.id(j), b).unwrap();
                commutation = commutation.max(max_abs(&(e * f - f * e)));
            }
        }
    }
    let report = RealizationReport {
        state_norm,
        idempotence,
        orthogonality,
        completeness,
        commutation,
        pass: false,
    };
    let pass = report.worst() <= REALIZATION_TOL;
    Ok(RealizationReport { pass, ..report })
}

/// Evaluate the behaviour of a validated realization: for each maximal
/// context and joint outcome, probability = ‖(∏ E) ψ‖², the squared norm of
/// the projected state.
pub fn behaviour_from_realization(r: &Realization, s: &Scenario) -> Result<Behaviour, QuantumError> {
    let report = validate_realization(r, s)?;
    if !report.pass {
        return Err(QuantumError::ValidationFailed { residual: report.worst() });
    }
    Ok(behaviour_from_projectors_unchecked(r, s))
}

/// Behaviour evaluation without the validation gate (used by the see-saw,
/// whose iterates are exact projectors by construction).
pub(crate) fn behaviour_from_projectors_unchecked(r: &Realization, s: &Scenario) -> Behaviour {
    let mut tables = BTreeMap::new();
    for ctx in s.maximal_contexts() {
        let dims = ctx.outcome_dims(s);
        let len: usize = dims.iter().product();
        let mut table = vec![0.0; len];
        for (idx, slot) in table.iter_mut().enumerate() {
            let outs = joint_outcomes(&dims, idx);
            let mut v = r.state.clone();
            for (&m, &a) in ctx.members().iter().zip(&outs) {
                v = r.projector(s.id(m), a).unwrap() * v;
            }
            *slot = v.norm_squared().min(1.0);
        }
        tables.insert(ctx, table);
    }
    Behaviour::new(s.clone(), tables).expect("projective tables are valid")
}

// ---------------------------------------------------------------------------
// The standard CHSH realization at 2√2.
// ---------------------------------------------------------------------------

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn qubit_projectors(observable: &CMatrix) -> (CMatrix, CMatrix) {
    // Projectors onto the ±1 eigenspaces of a traceless unit observable.
    let eye = CMatrix::identity(2, 2);
    let plus = (&eye + observable) * c(0.5);
    let minus = (&eye - observable) * c(0.5);
    (plus, minus)
}

/// The dimension-4 (qubit ⊗ qubit) realization attaining CHSH value 2√2:
/// x0 = Z, x1 = X on one side; y0 = (Z+X)/√2, y1 = (Z−X)/√2 on the other;
/// state |Φ+⟩ = (|00⟩ + |11⟩)/√2. Outcome 0 is the +1 eigenspace.
pub fn tsirelson_realization() -> Realization {
    let sq = std::f64::consts::FRAC_1_SQRT_2;
    let z = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let x = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let y0_obs = (&z + &x) * c(sq);
    let y1_obs = (&z - &x) * c(sq);
    let eye2 = CMatrix::identity(2, 2);

    let mut projectors = BTreeMap::new();
    let mut put = |id: &str, obs: &CMatrix, local_is_first: bool| {
        let (p, m) = qubit_projectors(obs);
        let (e0, e1) = if local_is_first {
            (p.kronecker(&eye2), m.kronecker(&eye2))
        } else {
            (eye2.kronecker(&p), eye2.kronecker(&m))
        };
        projectors.insert((id.to_string(), 0), e0);
        projectors.insert((id.to_string(), 1), e1);
    };
    put("x0", &z, true);
    put("x1", &x, true);
    put("y0", &y0_obs, false);
    put("y1", &y1_obs, false);

    let mut state = CVector::zeros(4);
    state[0] = c(sq);
    state[3] = c(sq);
    Realization { dim: 4, state, projectors }
}

/// Behaviour of the standard CHSH realization (entries are (2 ± √2)/8).
pub fn tsirelson_behaviour() -> Behaviour {
    behaviour_from_realization(&tsirelson_realization(), &chsh_scenario())
        .expect("standard realization validates")
}

/// Tensor two realizations on scenarios with disjoint measurement ids.
pub fn tensor_realizations(
    r1: &Realization,
    s1: &Scenario,
    r2: &Realization,
    s2: &Scenario,
) -> Result<Realization, QuantumError> {
    for m in s2.measurements() {
        if s1.index_of(&m.id).is_ok() {
            return Err(QuantumError::UnsupportedScenario {
                reason: format!("tensor of realizations requires disjoint ids; `{}` repeats", m.id),
            });
        }
    }
    let d = r1.dim * r2.dim;
    let state = kron_vec(&r1.state, &r2.state);
    let eye1 = CMatrix::identity(r1.dim, r1.dim);
    let eye2 = CMatrix::identity(r2.dim, r2.dim);
    let mut projectors = BTreeMap::new();
    for ((id, a), e) in &r1.projectors {
        projectors.insert((id.clone(), *a), e.kronecker(&eye2));
    }
    for ((id, a), e) in &r2.projectors {
        projectors.insert((id.clone(), *a), eye1.kronecker(e));
    }
    Ok(Realization { dim: d, state, projectors })
}

fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Coarse-graining.
// ---------------------------------------------------------------------------

/// A partition of one measurement's outcome set into disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseGrainingPartition {
    pub measurement: String,
    pub blocks: Vec<Vec<usize>>,
}

impl CoarseGrainingPartition {
    pub fn identity(measurement: &str, outcomes: usize) -> Self {
        CoarseGrainingPartition {
            measurement: measurement.to_string(),
            blocks: (0..outcomes).map(|a| vec![a]).collect(),
        }
    }

    fn validate(&self, outcomes: usize) -> Result<(), QuantumError> {
        let mut seen = vec![false; outcomes];
        for b in &self.blocks {
            if b.is_empty() {
                return Err(QuantumError::InvalidPartition {
                    id: self.measurement.clone(),
                    reason: "empty block".into(),
                });
            }
            for &a in b {
                if a >= outcomes || seen[a] {
                    return Err(QuantumError::InvalidPartition {
                        id: self.measurement.clone(),
                        reason: format!("outcome {a} out of range or repeated"),
                    });
                }
                seen[a] = true;
            }
        }
        if !seen.iter().all(|&x| x) {
            return Err(QuantumError::InvalidPartition {
                id: self.measurement.clone(),
                reason: "blocks do not cover the outcome set".into(),
            });
        }
        Ok(())
    }
}

/// Replace one measurement's projectors by block sums E_c = Σ_{a ∈ A_c} E_a.
/// Sums of mutually orthogonal projectors are projectors, so the result
/// satisfies the same axioms.
pub fn coarse_grain_projectors(
    r: &Realization,
    p: &CoarseGrainingPartition,
) -> Result<Realization, QuantumError> {
    let outcomes = r.outcome_count(&p.measurement);
    if outcomes == 0 {
        return Err(QuantumError::MissingProjector { id: p.measurement.clone(), outcome: 0 });
    }
    p.validate(outcomes)?;
    let mut projectors: BTreeMap<(String, usize), CMatrix> = r
        .projectors
        .iter()
        .filter(|((id, _), _)| *id != p.measurement)
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    for (cidx, block) in p.blocks.iter().enumerate() {
        let mut e = CMatrix::zeros(r.dim, r.dim);
        for &a in block {
            e += r.projector(&p.measurement, a).ok_or_else(|| QuantumError::MissingProjector {
                id: p.measurement.clone(),
                outcome: a,
            })?;
        }
        projectors.insert((p.measurement.clone(), cidx), e);
    }
    Ok(Realization { dim: r.dim, state: r.state.clone(), projectors })
}

// ---------------------------------------------------------------------------
// Ideal-measurement checks.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct IdealReport {
    /// Max deviation of repeat-outcome probability from 1 over all events of
    /// positive probability.
    pub repeatability: f64,
    /// Max change of any joint table when a context is measured in reverse
    /// order.
    pub order_invariance: f64,
    /// Coarse-grainings enumerated (all outcome partitions, each measurement).
    pub coarse_grainings_checked: usize,
    /// Worst residual among all coarse-grained realizations (axioms,
    /// repeatability, order invariance).
    pub coarse_worst: f64,
    pub pass: bool,
}

const PARTITION_CAP: usize = 8;

/// Enumerate set partitions of {0..n-1} as restricted growth strings.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        out.push(rgs.clone());
        // Next RGS: increment rightmost position that can grow.
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let max_prev = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prev {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

fn rgs_to_blocks(rgs: &[usize]) -> Vec<Vec<usize>> {
    let nblocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); nblocks];
    for (a, &b) in rgs.iter().enumerate() {
        blocks[b].push(a);
    }
    blocks
}

fn repeatability_residual(r: &Realization, s: &Scenario) -> f64 {
    let mut worst = 0.0f64;
    for ctx in s.maximal_contexts() {
        let dims = ctx.outcome_dims(s);
        let len: usize = dims.iter().product();
        for idx in 0..len {
            let outs = joint_outcomes(&dims, idx);
            let mut v = r.state.clone();
            for (&m, &a) in ctx.members().iter().zip(&outs) {
                v = r.projector(s.id(m), a).unwrap() * v;
            }
            let p = v.norm_squared();
            if p > 1e-12 {
                let post = v / Complex64::new(p.sqrt(), 0.0);
                for (&m, &a) in ctx.members().iter().zip(&outs) {
                    let again = r.projector(s.id(m), a).unwrap() * &post;
                    worst = worst.max((again.norm_squared() - 1.0).abs());
                }
            }
        }
    }
    worst
}

fn order_invariance_residual(r: &Realization, s: &Scenario) -> f64 {
    let mut worst = 0.0f64;
    for ctx in s.maximal_contexts() {
        let dims = ctx.outcome_dims(s);
        let len: usize = dims.iter().product();
        for idx in 0..len {
            let outs = joint_outcomes(&dims, idx);
            let mut fwd = r.state.clone();
            for (&m, &a) in ctx.members().iter().zip(&outs) {
                fwd = r.projector(s.id(m), a).unwrap() * fwd;
            }
            let mut rev = r.state.clone();
            for (&m, &a) in ctx.members().iter().zip(&outs).rev() {
                rev = r.projector(s.id(m), a).unwrap() * rev;
            }
            worst = worst.max((fwd.norm_squared() - rev.norm_squared()).abs());
        }
    }
    worst
}

/// Check that a validated realization behaves as a family of ideal
/// measurements: repeatability, non-disturbance of compatible measurements
/// (order invariance of joint statistics), and both properties for every
/// coarse-graining of every measurement (≤ 8 outcomes each).
pub fn check_ideal(r: &Realization, s: &Scenario) -> Result<IdealReport, QuantumError> {
    let base = validate_realization(r, s)?;
    if !base.pass {
        return Err(QuantumError::ValidationFailed { residual: base.worst() });
    }
    for m in s.measurements() {
        if m.outcomes > PARTITION_CAP {
            return Err(QuantumError::PartitionCapExceeded {
                id: m.id.clone(),
                outcomes: m.outcomes,
                cap: PARTITION_CAP,
            });
        }
    }

    let repeatability = repeatability_residual(r, s);
    let order_invariance = order_invariance_residual(r, s);

    let mut coarse_worst = 0.0f64;
    let mut checked = 0usize;
    for m in s.measurements() {
        for rgs in partitions(m.outcomes) {
            let blocks = rgs_to_blocks(&rgs);
            let part = CoarseGrainingPartition { measurement: m.id.clone(), blocks: blocks.clone() };
            let coarse = coarse_grain_projectors(r, &part)?;
            checked += 1;
            // Axioms for the coarsened measurement itself.
            let d = r.dim;
            let mut sum = CMatrix::zeros(d, d);
            for cidx in 0..blocks.len() {
                let e = coarse.projector(&m.id, cidx).unwrap();
                coarse_worst = coarse_worst.max(max_abs(&(e * e - e)));
                sum += e;
                for o in (cidx + 1)..blocks.len() {
                    let f = coarse.projector(&m.id, o).unwrap();
                    coarse_worst = coarse_worst.max(max_abs(&(e * f)));
                }
            }
            coarse_worst = coarse_worst.max(max_abs(&(sum - CMatrix::identity(d, d))));
            // Repeatability and order invariance on the contexts holding m,
            // with the coarse outcome dimensions substituted in.
            if blocks.len() >= 2 {
                let coarse_scenario = scenario_with_outcomes(s, &m.id, blocks.len())?;
                coarse_worst = coarse_worst.max(repeatability_residual(&coarse, &coarse_scenario));
                coarse_worst =
                    coarse_worst.max(order_invariance_residual(&coarse, &coarse_scenario));
            } else {
                // Full merge: single projector 1; repeatability is immediate,
                // check it on the state directly.
                let e = coarse.projector(&m.id, 0).unwrap();
                coarse_worst = coarse_worst.max(((e * &r.state).norm_squared() - 1.0).abs());
            }
        }
    }

    let tol = 1e-8;
    let pass = repeatability <= tol && order_invariance <= tol && coarse_worst <= tol;
    Ok(IdealReport {
        repeatability,
        order_invariance,
        coarse_grainings_checked: checked,
        coarse_worst,
        pass,
    })
}

fn scenario_with_outcomes(
    s: &Scenario,
    id: &str,
    outcomes: usize,
) -> Result<Scenario, QuantumError> {
    let measurements = s
        .measurements()
        .iter()
        .map(|m| (m.id.clone(), if m.id == id { outcomes } else { m.outcomes }))
        .collect();
    let compatible = s
        .compatible_pairs()
        .map(|(i, j)| (s.id(i).to_string(), s.id(j).to_string()))
        .collect();
    Ok(Scenario::new(measurements, compatible)?)
}

// ---------------------------------------------------------------------------
// Constraint (C) combined verdict.
// ---------------------------------------------------------------------------

/// Outcome of the combined search-and-refute pipeline for constraint (C).
#[derive(Debug, Clone)]
pub enum ConstraintCVerdict {
    /// A realization reproducing the behaviour to the stated distance.
    Quantum { dimension: usize, distance: f64, realization: Box<Realization> },
    /// A relaxation-infeasibility certificate: no realization in any
    /// dimension can reproduce the behaviour.
    NonQuantum { level: usize, certificate: NpaCertificate, best_distance: f64 },
    /// Neither side concluded.
    Undecided { best_distance: f64, best_dimension: usize, npa: NpaOutcome },
}

/// Distance below which a see-saw fit counts as an exact realization.
pub const QUANTUM_DISTANCE_TOL: f64 = 1e-6;

/// Run the see-saw search for d = 1..d_max and the moment-matrix relaxation
/// at `level`; report "quantum", "non-quantum", or "undecided (gap)".
pub fn constraint_c_verdict(
    b: &Behaviour,
    d_max: usize,
    level: usize,
    seed: u64,
) -> Result<ConstraintCVerdict, QuantumError> {
    let s = b.scenario();
    let mut best: Option<(usize, SeesawResult)> = None;
    for d in 1..=d_max {
        let fit = seesaw_fit(s, b, d, &SeesawOptions { seed, ..SeesawOptions::default() })?;
        let better = best.as_ref().map_or(true, |(_, r)| fit.distance < r.distance);
        if better {
            best = Some((d, fit));
        }
        if best.as_ref().unwrap().1.distance < QUANTUM_DISTANCE_TOL {
            break;
        }
    }
    let (best_d, best_fit) = best.expect("d_max >= 1");
    if best_fit.distance < QUANTUM_DISTANCE_TOL {
        return Ok(ConstraintCVerdict::Quantum {
            dimension: best_d,
            distance: best_fit.distance,
            realization: Box::new(best_fit.realization),
        });
    }
    let npa = npa_infeasibility(s, b, level)?;
    match npa {
        NpaOutcome::Infeasible { ref certificate } => Ok(ConstraintCVerdict::NonQuantum {
            level,
            certificate: certificate.clone(),
            best_distance: best_fit.distance,
        }),
        other => Ok(ConstraintCVerdict::Undecided {
            best_distance: best_fit.distance,
            best_dimension: best_d,
            npa: other,
        }),
    }
}

#[cfg(test)]
mod tests;
