//! Bell / Kochen-Specker scenarios, their contexts, and behaviours.
//!
//! A scenario is a finite set of measurements with outcome counts plus a
//! symmetric compatibility relation; contexts are cliques of the
//! compatibility graph. A behaviour stores one joint probability table per
//! maximal context; everything on sub-contexts is derived by marginalization,
//! which is well-defined exactly when the non-disturbance check passes.

mod catalog;

pub use catalog::{catalog_get, catalog_names, chsh_scenario, chsh_value, cycle_scenario};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("duplicate measurement id `{0}`")]
    DuplicateId(String),
    #[error("measurement `{0}` has {1} outcomes; at least 2 required")]
    TooFewOutcomes(String, usize),
    #[error("unknown measurement id `{0}`")]
    UnknownMeasurement(String),
    #[error("measurement `{0}` declared compatible with itself")]
    SelfCompatibility(String),
    #[error("context {0:?} is not a clique of the compatibility graph")]
    NotAClique(Vec<String>),
    #[error("context must be nonempty")]
    EmptyContext,
    #[error("outcome {outcome} out of range for measurement `{id}` ({count} outcomes)")]
    OutcomeOutOfRange { id: String, outcome: usize, count: usize },
    #[error("missing table for maximal context {0:?}")]
    MissingTable(Vec<String>),
    #[error("unexpected table for non-maximal context {0:?}")]
    UnexpectedTable(Vec<String>),
    #[error("table for context {context:?} has {got} entries, expected {expected}")]
    WrongTableLength { context: Vec<String>, got: usize, expected: usize },
    #[error("entry {value} in context {context:?} outside [0,1]")]
    EntryOutOfRange { context: Vec<String>, value: f64 },
    #[error("{subset:?} is not contained in {context:?}")]
    SubsetNotContained { subset: Vec<String>, context: Vec<String> },
    #[error("unknown catalog name `{name}`; available: {available:?}")]
    UnknownCatalogName { name: String, available: Vec<&'static str> },
    #[error("scenarios do not match")]
    ScenarioMismatch,
}

/// One measurement: an identifier and its number of outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub id: String,
    pub outcomes: usize,
}

/// A measurement scenario. Measurements are kept sorted by id so that every
/// derived ordering is reproducible.
///
/// Most scenarios take their measured contexts to be the maximal cliques of
/// the compatibility graph. A scenario may instead declare its maximal
/// contexts explicitly; the canonical case is the triangle of pairwise
/// compatible measurements whose three pairs are measured jointly but whose
/// triple is not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioJson", into = "ScenarioJson")]
pub struct Scenario {
    measurements: Vec<Measurement>,
    /// Normalized pairs (i, j) with i < j over measurement indices.
    compat: BTreeSet<(usize, usize)>,
    /// Explicit maximal measured contexts, when they are not the maximal
    /// cliques (sorted member lists, antichain, covering every measurement).
    contexts: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize, Clone)]
struct ScenarioJson {
    measurements: Vec<Measurement>,
    compatible: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    contexts: Option<Vec<Vec<String>>>,
}

impl TryFrom<ScenarioJson> for Scenario {
    type Error = ScenarioError;
    fn try_from(j: ScenarioJson) -> Result<Self, Self::Error> {
        let measurements = j.measurements.into_iter().map(|m| (m.id, m.outcomes)).collect();
        match j.contexts {
            None => Scenario::new(measurements, j.compatible),
            Some(ctxs) => {
                let ctxs: Vec<Vec<&str>> = ctxs
                    .iter()
                    .map(|c| c.iter().map(String::as_str).collect())
                    .collect();
                Scenario::with_contexts(measurements, j.compatible, ctxs)
            }
        }
    }
}

impl From<Scenario> for ScenarioJson {
    fn from(s: Scenario) -> Self {
        let compatible = s
            .compat
            .iter()
            .map(|&(i, j)| (s.measurements[i].id.clone(), s.measurements[j].id.clone()))
            .collect();
        let contexts = s
            .contexts
            .as_ref()
            .map(|cs| cs.iter().map(|c| s.ids_of(c)).collect());
        ScenarioJson { measurements: s.measurements, compatible, contexts }
    }
}

impl Scenario {
    pub fn new(
        measurements: Vec<(String, usize)>,
        compatible: Vec<(String, String)>,
    ) -> Result<Self, ScenarioError> {
        let mut ms: Vec<Measurement> =
            measurements.into_iter().map(|(id, outcomes)| Measurement { id, outcomes }).collect();
        ms.sort_by(|a, b| a.id.cmp(&b.id));
        for w in ms.windows(2) {
            if w[0].id == w[1].id {
                return Err(ScenarioError::DuplicateId(w[0].id.clone()));
            }
        }
        for m in &ms {
            if m.outcomes < 2 {
                return Err(ScenarioError::TooFewOutcomes(m.id.clone(), m.outcomes));
            }
        }
        let index = |id: &str| -> Result<usize, ScenarioError> {
            ms.binary_search_by(|m| m.id.as_str().cmp(id))
                .map_err(|_| ScenarioError::UnknownMeasurement(id.to_string()))
        };
        let mut compat = BTreeSet::new();
        for (a, b) in &compatible {
            let i = index(a)?;
            let j = index(b)?;
            if i == j {
                return Err(ScenarioError::SelfCompatibility(a.clone()));
            }
            compat.insert((i.min(j), i.max(j)));
        }
        Ok(Scenario { measurements: ms, compat, contexts: None })
    }

    /// Scenario with explicitly declared maximal measured contexts. Each
    /// context must be a clique; together they must cover every measurement
    /// and form an antichain under inclusion.
    pub fn with_contexts(
        measurements: Vec<(String, usize)>,
        compatible: Vec<(String, String)>,
        contexts: Vec<Vec<&str>>,
    ) -> Result<Self, ScenarioError> {
        let base = Scenario::new(measurements, compatible)?;
        let mut resolved: Vec<Vec<usize>> = Vec::with_capacity(contexts.len());
        for ids in &contexts {
            let ctx = Context::from_ids(&base, ids)?;
            resolved.push(ctx.members().to_vec());
        }
        resolved.sort();
        resolved.dedup();
        for (k, a) in resolved.iter().enumerate() {
            for (l, b) in resolved.iter().enumerate() {
                if k != l && a.iter().all(|m| b.contains(m)) {
                    return Err(ScenarioError::UnexpectedTable(base.ids_of(a)));
                }
            }
        }
        let covered: BTreeSet<usize> = resolved.iter().flatten().copied().collect();
        if covered.len() != base.len() {
            let missing = (0..base.len()).find(|m| !covered.contains(m)).unwrap();
            return Err(ScenarioError::UnknownMeasurement(base.id(missing).to_string()));
        }
        Ok(Scenario { contexts: Some(resolved), ..base })
    }

    /// The maximal measured contexts: the explicit declaration when present,
    /// the maximal cliques of the compatibility graph otherwise.
    pub fn maximal_contexts(&self) -> Vec<Context> {
        match &self.contexts {
            Some(cs) => cs.iter().cloned().map(Context::from_sorted_members).collect(),
            None => enumerate_contexts(self, true),
        }
    }

    pub fn len(&self) -> usize {
        self.measurements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measurements.is_empty()
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    pub fn outcomes(&self, idx: usize) -> usize {
        self.measurements[idx].outcomes
    }

    pub fn id(&self, idx: usize) -> &str {
        &self.measurements[idx].id
    }

    pub fn index_of(&self, id: &str) -> Result<usize, ScenarioError> {
        self.measurements
            .binary_search_by(|m| m.id.as_str().cmp(id))
            .map_err(|_| ScenarioError::UnknownMeasurement(id.to_string()))
    }

    pub fn compatible(&self, i: usize, j: usize) -> bool {
        i != j && self.compat.contains(&(i.min(j), i.max(j)))
    }

    pub fn compatible_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.compat.iter().copied()
    }

    fn ids_of(&self, members: &[usize]) -> Vec<String> {
        members.iter().map(|&i| self.measurements[i].id.clone()).collect()
    }
}

/// A set of pairwise compatible measurements, stored as sorted indices into
/// the owning scenario.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    members: Vec<usize>,
}

impl Context {
    pub fn new(s: &Scenario, members: &[usize]) -> Result<Self, ScenarioError> {
        if members.is_empty() {
            return Err(ScenarioError::EmptyContext);
        }
        let mut ms: Vec<usize> = members.to_vec();
        ms.sort_unstable();
        ms.dedup();
        for (ai, &a) in ms.iter().enumerate() {
            for &b in &ms[ai + 1..] {
                if !s.compatible(a, b) {
                    return Err(ScenarioError::NotAClique(s.ids_of(&ms)));
                }
            }
        }
        Ok(Context { members: ms })
    }

    pub(crate) fn from_sorted_members(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Context { members }
    }

    pub fn from_ids(s: &Scenario, ids: &[&str]) -> Result<Self, ScenarioError> {
        let members: Result<Vec<usize>, _> = ids.iter().map(|id| s.index_of(id)).collect();
        Context::new(s, &members?)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: usize) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn is_subset_of(&self, other: &Context) -> bool {
        self.members.iter().all(|m| other.contains(*m))
    }

    pub fn ids(&self, s: &Scenario) -> Vec<String> {
        s.ids_of(&self.members)
    }

    /// Canonical JSON key: sorted ids joined by ",".
    pub fn key(&self, s: &Scenario) -> String {
        self.ids(s).join(",")
    }

    pub fn outcome_dims(&self, s: &Scenario) -> Vec<usize> {
        self.members.iter().map(|&m| s.outcomes(m)).collect()
    }

    pub fn table_len(&self, s: &Scenario) -> usize {
        self.outcome_dims(s).iter().product()
    }
}

/// One event: a joint outcome assignment over a context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub context: Context,
    pub outcomes: Vec<usize>,
}

impl Event {
    pub fn new(s: &Scenario, context: Context, outcomes: Vec<usize>) -> Result<Self, ScenarioError> {
        assert_eq!(context.len(), outcomes.len(), "one outcome per context member");
        for (&m, &a) in context.members().iter().zip(&outcomes) {
            if a >= s.outcomes(m) {
                return Err(ScenarioError::OutcomeOutOfRange {
                    id: s.id(m).to_string(),
                    outcome: a,
                    count: s.outcomes(m),
                });
            }
        }
        Ok(Event { context, outcomes })
    }

    /// Canonical label "a0,a1|id0,id1" with ids sorted.
    pub fn label(&self, s: &Scenario) -> String {
        let outs: Vec<String> = self.outcomes.iter().map(|a| a.to_string()).collect();
        format!("{}|{}", outs.join(","), self.context.key(s))
    }

    pub fn parse_label(s: &Scenario, label: &str) -> Result<Self, ScenarioError> {
        let (outs, ids) = label
            .split_once('|')
            .ok_or_else(|| ScenarioError::UnknownMeasurement(label.to_string()))?;
        let ids: Vec<&str> = ids.split(',').collect();
        let context = Context::from_ids(s, &ids)?;
        let outcomes: Vec<usize> = outs
            .split(',')
            .map(|t| t.parse::<usize>().map_err(|_| ScenarioError::UnknownMeasurement(label.into())))
            .collect::<Result<_, _>>()?;
        Event::new(s, context, outcomes)
    }

    /// Outcome assigned to measurement `m`, if `m` belongs to the context.
    pub fn outcome_of(&self, m: usize) -> Option<usize> {
        self.context.members.binary_search(&m).ok().map(|pos| self.outcomes[pos])
    }
}

/// Row-major index of a joint outcome under lexicographic ordering (first
/// member most significant).
pub fn joint_index(dims: &[usize], outcomes: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), outcomes.len());
    let mut idx = 0;
    for (d, a) in dims.iter().zip(outcomes) {
        debug_assert!(a < d);
        idx = idx * d + a;
    }
    idx
}

/// Inverse of [`joint_index`].
pub fn joint_outcomes(dims: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

/// Enumerate contexts (cliques of the compatibility graph), lexicographically
/// ordered by their sorted member sequences.
pub fn enumerate_contexts(s: &Scenario, maximal_only: bool) -> Vec<Context> {
    let n = s.len();
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn dfs(s: &Scenario, start: usize, current: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        for v in start..s.len() {
            if current.iter().all(|&u| s.compatible(u, v)) {
                current.push(v);
                all.push(current.clone());
                dfs(s, v + 1, current, all);
                current.pop();
            }
        }
    }
    dfs(s, 0, &mut current, &mut all);
    let keep = |members: &Vec<usize>| -> bool {
        if !maximal_only {
            return true;
        }
        (0..n).all(|v| members.contains(&v) || !members.iter().all(|&u| s.compatible(u, v)))
    };
    all.into_iter().filter(keep).map(Context::from_sorted_members).collect()
}

/// Result of the normalization check (constraint A).
#[derive(Debug, Clone)]
pub struct NormalizationReport {
    pub pass: bool,
    /// Context with the largest |sum − 1| and that deviation.
    pub worst_context: Vec<String>,
    pub worst_deviation: f64,
}

/// Witness of a marginal mismatch between two maximal contexts.
#[derive(Debug, Clone)]
pub struct MarginalWitness {
    pub measurement: String,
    pub outcome: usize,
    pub context_a: Vec<String>,
    pub context_b: Vec<String>,
    pub p_a: f64,
    pub p_b: f64,
}

/// Result of the non-disturbance check (constraint B).
#[derive(Debug, Clone)]
pub struct MarginalReport {
    pub pass: bool,
    pub pairs_checked: usize,
    pub max_mismatch: f64,
    /// Offending (measurement, outcome, context pair) witnesses above tol.
    pub witnesses: Vec<MarginalWitness>,
}

/// A behaviour: one probability table per maximal context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BehaviourJson", into = "BehaviourJson")]
pub struct Behaviour {
    scenario: Scenario,
    tables: BTreeMap<Context, Vec<f64>>,
}

#[derive(Serialize, Deserialize, Clone)]
struct BehaviourJson {
    scenario: Scenario,
    tables: BTreeMap<String, Vec<f64>>,
}

impl TryFrom<BehaviourJson> for Behaviour {
    type Error = ScenarioError;
    fn try_from(j: BehaviourJson) -> Result<Self, Self::Error> {
        let mut tables = BTreeMap::new();
        for (key, table) in j.tables {
            let ids: Vec<&str> = key.split(',').collect();
            let ctx = Context::from_ids(&j.scenario, &ids)?;
            tables.insert(ctx, table);
        }
        Behaviour::new(j.scenario, tables)
    }
}

impl From<Behaviour> for BehaviourJson {
    fn from(b: Behaviour) -> Self {
        let tables = b.tables.iter().map(|(c, t)| (c.key(&b.scenario), t.clone())).collect();
        BehaviourJson { scenario: b.scenario, tables }
    }
}

impl Behaviour {
    /// Build a behaviour from per-maximal-context tables. Requires exactly
    /// one table per maximal context with entries in [0,1]; normalization is
    /// checked separately by [`check_normalization`].
    pub fn new(
        scenario: Scenario,
        tables: BTreeMap<Context, Vec<f64>>,
    ) -> Result<Self, ScenarioError> {
        let maximal: BTreeSet<Context> = scenario.maximal_contexts().into_iter().collect();
        for ctx in tables.keys() {
            if !maximal.contains(ctx) {
                return Err(ScenarioError::UnexpectedTable(ctx.ids(&scenario)));
            }
        }
        for ctx in &maximal {
            let Some(table) = tables.get(ctx) else {
                return Err(ScenarioError::MissingTable(ctx.ids(&scenario)));
            };
            let expected = ctx.table_len(&scenario);
            if table.len() != expected {
                return Err(ScenarioError::WrongTableLength {
                    context: ctx.ids(&scenario),
                    got: table.len(),
                    expected,
                });
            }
            for &v in table {
                if !v.is_finite() || v < -1e-12 || v > 1.0 + 1e-12 {
                    return Err(ScenarioError::EntryOutOfRange {
                        context: ctx.ids(&scenario),
                        value: v,
                    });
                }
            }
        }
        Ok(Behaviour { scenario, tables })
    }

    /// Convenience constructor from (context ids, table) pairs.
    pub fn from_rows(
        scenario: Scenario,
        rows: Vec<(Vec<&str>, Vec<f64>)>,
    ) -> Result<Self, ScenarioError> {
        let mut tables = BTreeMap::new();
        for (ids, table) in rows {
            let ctx = Context::from_ids(&scenario, &ids)?;
            tables.insert(ctx, table);
        }
        Behaviour::new(scenario, tables)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn tables(&self) -> &BTreeMap<Context, Vec<f64>> {
        &self.tables
    }

    pub fn table(&self, ctx: &Context) -> Option<&[f64]> {
        self.tables.get(ctx).map(|t| t.as_slice())
    }

    /// Probability of an event (context derived by marginalization if it is
    /// not itself maximal).
    pub fn probability(&self, ev: &Event) -> Result<f64, ScenarioError> {
        let table = marginalize(self, &ev.context, &ev.context)?;
        let dims = ev.context.outcome_dims(&self.scenario);
        Ok(table[joint_index(&dims, &ev.outcomes)])
    }

    /// Stacked probability vector over all maximal contexts in canonical
    /// order (context order, then lexicographic joint outcomes).
    pub fn stacked(&self) -> Vec<f64> {
        self.tables.values().flat_map(|t| t.iter().copied()).collect()
    }
}

/// Constraint (A): every maximal-context table sums to 1 within `tol`.
/// Sub-context tables are marginal sums of these, so they are then normalized
/// automatically.
pub fn check_normalization(b: &Behaviour, tol: f64) -> NormalizationReport {
    let mut worst: Option<(f64, &Context)> = None;
    for (ctx, table) in &b.tables {
        let dev = (table.iter().sum::<f64>() - 1.0).abs();
        if worst.map_or(true, |(w, _)| dev > w) {
            worst = Some((dev, ctx));
        }
    }
    match worst {
        Some((dev, ctx)) => NormalizationReport {
            pass: dev <= tol,
            worst_context: ctx.ids(&b.scenario),
            worst_deviation: dev,
        },
        None => NormalizationReport { pass: true, worst_context: vec![], worst_deviation: 0.0 },
    }
}

/// Constraint (B): for every measurement and every pair of maximal contexts
/// containing it, the two marginal distributions agree within `tol`.
pub fn check_nondisturbance(b: &Behaviour, tol: f64) -> MarginalReport {
    let s = &b.scenario;
    let contexts: Vec<&Context> = b.tables.keys().collect();
    let mut pairs_checked = 0;
    let mut max_mismatch: f64 = 0.0;
    let mut witnesses = Vec::new();
    for m in 0..s.len() {
        let holding: Vec<&&Context> = contexts.iter().filter(|c| c.contains(m)).collect();
        for ai in 0..holding.len() {
            for bi in (ai + 1)..holding.len() {
                let ca = holding[ai];
                let cb = holding[bi];
                pairs_checked += 1;
                let sub = Context { members: vec![m] };
                let pa = marginal_from_table(
                    b.table(ca).unwrap(),
                    &ca.outcome_dims(s),
                    &positions(ca, &sub),
                );
                let pb = marginal_from_table(
                    b.table(cb).unwrap(),
                    &cb.outcome_dims(s),
                    &positions(cb, &sub),
                );
                for (outcome, (x, y)) in pa.iter().zip(&pb).enumerate() {
                    let d = (x - y).abs();
                    if d > max_mismatch {
                        max_mismatch = d;
                    }
                    if d > tol {
                        witnesses.push(MarginalWitness {
                            measurement: s.id(m).to_string(),
                            outcome,
                            context_a: ca.ids(s),
                            context_b: cb.ids(s),
                            p_a: *x,
                            p_b: *y,
                        });
                    }
                }
            }
        }
    }
    MarginalReport { pass: witnesses.is_empty(), pairs_checked, max_mismatch, witnesses }
}

fn positions(ctx: &Context, subset: &Context) -> Vec<usize> {
    subset
        .members
        .iter()
        .map(|m| ctx.members.binary_search(m).expect("subset member present"))
        .collect()
}

/// Sum a joint table over the positions not listed in `keep` (positions are
/// indices into the context's member list).
pub fn marginal_from_table(table: &[f64], dims: &[usize], keep: &[usize]) -> Vec<f64> {
    let out_dims: Vec<usize> = keep.iter().map(|&p| dims[p]).collect();
    let mut out = vec![0.0; out_dims.iter().product::<usize>().max(1)];
    for (idx, &v) in table.iter().enumerate() {
        let outcomes = joint_outcomes(dims, idx);
        let kept: Vec<usize> = keep.iter().map(|&p| outcomes[p]).collect();
        out[joint_index(&out_dims, &kept)] += v;
    }
    out
}

/// Marginal table of `subset` inside context `c`.
///
/// If `c` is not itself maximal its table is first derived from the
/// lexicographically first maximal context containing it (well-defined for
/// non-disturbing behaviours).
pub fn marginalize(b: &Behaviour, c: &Context, subset: &Context) -> Result<Vec<f64>, ScenarioError> {
    if !subset.is_subset_of(c) {
        return Err(ScenarioError::SubsetNotContained {
            subset: subset.ids(&b.scenario),
            context: c.ids(&b.scenario),
        });
    }
    let s = &b.scenario;
    if let Some(table) = b.table(c) {
        return Ok(marginal_from_table(table, &c.outcome_dims(s), &positions(c, subset)));
    }
    let host = b
        .tables
        .keys()
        .find(|max| c.is_subset_of(max))
        .ok_or_else(|| ScenarioError::NotAClique(c.ids(s)))?;
    let table = b.table(host).unwrap();
    Ok(marginal_from_table(table, &host.outcome_dims(s), &positions(host, subset)))
}

/// Statistically independent composition: the disjoint-union scenario in
/// which every measurement of `b1` is compatible with every measurement of
/// `b2`, with product tables. Colliding measurement ids get the prefixes
/// "1:" and "2:".
pub fn tensor_behaviours(b1: &Behaviour, b2: &Behaviour) -> Result<Behaviour, ScenarioError> {
    let s1 = &b1.scenario;
    let s2 = &b2.scenario;
    let ids1: BTreeSet<&str> = s1.measurements.iter().map(|m| m.id.as_str()).collect();
    let collision = s2.measurements.iter().any(|m| ids1.contains(m.id.as_str()));
    let rename = |which: usize, id: &str| -> String {
        if collision {
            format!("{which}:{id}")
        } else {
            id.to_string()
        }
    };

    let mut measurements: Vec<(String, usize)> = Vec::new();
    for m in &s1.measurements {
        measurements.push((rename(1, &m.id), m.outcomes));
    }
    for m in &s2.measurements {
        measurements.push((rename(2, &m.id), m.outcomes));
    }
    let mut compatible: Vec<(String, String)> = Vec::new();
    for &(i, j) in &s1.compat {
        compatible.push((rename(1, s1.id(i)), rename(1, s1.id(j))));
    }
    for &(i, j) in &s2.compat {
        compatible.push((rename(2, s2.id(i)), rename(2, s2.id(j))));
    }
    for m1 in &s1.measurements {
        for m2 in &s2.measurements {
            compatible.push((rename(1, &m1.id), rename(2, &m2.id)));
        }
    }
    let mut s = Scenario::new(measurements, compatible)?;
    if s1.contexts.is_some() || s2.contexts.is_some() {
        let mut joint = Vec::new();
        for c1 in s1.maximal_contexts() {
            for c2 in s2.maximal_contexts() {
                let mut members: Vec<usize> = Vec::new();
                for &m in c1.members() {
                    members.push(s.index_of(&rename(1, s1.id(m)))?);
                }
                for &m in c2.members() {
                    members.push(s.index_of(&rename(2, s2.id(m)))?);
                }
                members.sort_unstable();
                joint.push(members);
            }
        }
        joint.sort();
        s.contexts = Some(joint);
    }

    // Joint maximal contexts are unions of one maximal context per factor.
    let mut tables = BTreeMap::new();
    for (c1, t1) in &b1.tables {
        for (c2, t2) in &b2.tables {
            let mut members: Vec<usize> = Vec::new();
            // (side, original index) for outcome lookups, aligned to `members`.
            let mut origin: Vec<(u8, usize)> = Vec::new();
            for &m in c1.members() {
                members.push(s.index_of(&rename(1, s1.id(m)))?);
                origin.push((1, m));
            }
            for &m in c2.members() {
                members.push(s.index_of(&rename(2, s2.id(m)))?);
                origin.push((2, m));
            }
            let mut order: Vec<usize> = (0..members.len()).collect();
            order.sort_by_key(|&k| members[k]);
            let sorted_members: Vec<usize> = order.iter().map(|&k| members[k]).collect();
            let ctx = Context::from_sorted_members(sorted_members);

            let dims = ctx.outcome_dims(&s);
            let dims1 = c1.outcome_dims(s1);
            let dims2 = c2.outcome_dims(s2);
            let mut table = vec![0.0; ctx.table_len(&s)];
            for (idx, slot) in table.iter_mut().enumerate() {
                let outs = joint_outcomes(&dims, idx);
                let mut o1 = vec![0usize; c1.len()];
                let mut o2 = vec![0usize; c2.len()];
                for (pos, &k) in order.iter().enumerate() {
                    let (side, orig) = origin[k];
                    if side == 1 {
                        let p = c1.members().binary_search(&orig).unwrap();
                        o1[p] = outs[pos];
                    } else {
                        let p = c2.members().binary_search(&orig).unwrap();
                        o2[p] = outs[pos];
                    }
                }
                *slot = t1[joint_index(&dims1, &o1)] * t2[joint_index(&dims2, &o2)];
            }
            tables.insert(ctx, table);
        }
    }
    Behaviour::new(s, tables)
}

#[cfg(test)]
mod tests;
