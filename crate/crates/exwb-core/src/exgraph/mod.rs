//! Graphs of exclusivity and their algebra.
//!
//! Vertices are events, edges mark mutual exclusivity: two events are
//! exclusive iff they assign different outcomes to at least one measurement
//! present in both. Event vertices are generated from maximal contexts
//! (sub-context events available separately). The module also carries the
//! graph operations the membership chain needs: complement, OR products and
//! powers, isomorphism search and the 4n-vertex self-complementary embedding.

mod iso;

pub use iso::{find_isomorphism, iso_with_seed, verify_isomorphism, IsoError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::{Behaviour, Context, Event, Scenario, ScenarioError};

#[derive(Debug, Error)]
pub enum ExgraphError {
    #[error("OR product would have {required} vertices; cap is {cap}")]
    OrCapExceeded { required: usize, cap: usize },
    #[error("graph has no labels; cannot map events")]
    NoLabels,
    #[error("label `{0}` does not name an event of the behaviour's scenario")]
    LabelMismatch(String),
    #[error("weight {0} outside [0,1]")]
    WeightOutOfRange(f64),
    #[error("expected {expected} weights, got {got}")]
    WeightDimension { got: usize, expected: usize },
    #[error("or_power needs n >= 1")]
    ZeroPower,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Default cap on OR-product vertex counts.
pub const DEFAULT_OR_CAP: usize = 100_000;

/// An undirected graph with optional vertex labels, bitset adjacency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct ExclusivityGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<GraphJson> for ExclusivityGraph {
    type Error = String;
    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        for &(a, b) in &j.edges {
            if a >= j.n || b >= j.n {
                return Err(format!("edge ({a},{b}) out of range for n={}", j.n));
            }
            if a == b {
                return Err(format!("self-loop at {a}"));
            }
        }
        if let Some(l) = &j.labels {
            if l.len() != j.n {
                return Err(format!("{} labels for {} vertices", l.len(), j.n));
            }
        }
        let mut g = ExclusivityGraph::new(j.n);
        for (a, b) in j.edges {
            g.add_edge(a, b);
        }
        g.labels = j.labels;
        Ok(g)
    }
}

impl From<ExclusivityGraph> for GraphJson {
    fn from(g: ExclusivityGraph) -> Self {
        GraphJson { n: g.n, edges: g.edges(), labels: g.labels }
    }
}

impl ExclusivityGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        ExclusivityGraph { n, words, adj: vec![0; n * words], labels: None }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = ExclusivityGraph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Cycle graph C_n (vertex i adjacent to i±1 mod n).
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ExclusivityGraph::from_edges(n, &edges)
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut g = ExclusivityGraph::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn edgeless(n: usize) -> Self {
        ExclusivityGraph::new(n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.n && b < self.n, "invalid edge ({a},{b})");
        self.adj[a * self.words + b / 64] |= 1 << (b % 64);
        self.adj[b * self.words + a / 64] |= 1 << (a % 64);
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && (self.adj[a * self.words + b / 64] >> (b % 64)) & 1 == 1
    }

    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as sorted (i, j) pairs with i < j.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    /// Subgraph induced by `keep` (in the given order); labels carried over.
    pub fn induced(&self, keep: &[usize]) -> ExclusivityGraph {
        let mut g = ExclusivityGraph::new(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        if let Some(l) = &self.labels {
            g.labels = Some(keep.iter().map(|&u| l[u].clone()).collect());
        }
        g
    }

    /// DOT rendering for external tooling.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in 0..self.n {
            match &self.labels {
                Some(l) => out.push_str(&format!("  v{v} [label=\"{}\"];\n", l[v])),
                None => out.push_str(&format!("  v{v};\n")),
            }
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  v{a} -- v{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// A point p(G) ∈ [0,1]^{|V(G)|}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightsJson", into = "WeightsJson")]
pub struct VertexWeights(Vec<f64>);

#[derive(Serialize, Deserialize, Clone)]
struct WeightsJson {
    weights: Vec<f64>,
}

impl TryFrom<WeightsJson> for VertexWeights {
    type Error = ExgraphError;
    fn try_from(j: WeightsJson) -> Result<Self, Self::Error> {
        VertexWeights::new(j.weights)
    }
}

impl From<VertexWeights> for WeightsJson {
    fn from(w: VertexWeights) -> Self {
        WeightsJson { weights: w.0 }
    }
}

impl VertexWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self, ExgraphError> {
        for &w in &weights {
            if !w.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&w) {
                return Err(ExgraphError::WeightOutOfRange(w));
            }
        }
        Ok(VertexWeights(weights))
    }

    pub fn uniform(n: usize, c: f64) -> Self {
        VertexWeights::new(vec![c; n]).expect("uniform weight in range")
    }

    /// Characteristic vector of a vertex subset.
    pub fn characteristic(n: usize, set: &[usize]) -> Self {
        let mut w = vec![0.0; n];
        for &v in set {
            w[v] = 1.0;
        }
        VertexWeights(w)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for VertexWeights {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Events of all maximal contexts in canonical order (context order, then
/// lexicographic joint outcomes) — the vertex set of [`exclusivity_graph`].
pub fn scenario_events(s: &Scenario) -> Vec<Event> {
    use crate::scenario::joint_outcomes;
    let mut events = Vec::new();
    for ctx in s.maximal_contexts() {
        let dims = ctx.outcome_dims(s);
        let len: usize = dims.iter().product();
        for idx in 0..len {
            let outs = joint_outcomes(&dims, idx);
            events.push(Event::new(s, ctx.clone(), outs).expect("valid event"));
        }
    }
    events
}

fn events_exclusive(a: &Event, b: &Event) -> bool {
    for (&m, &oa) in a.context.members().iter().zip(&a.outcomes) {
        if let Some(ob) = b.outcome_of(m) {
            if ob != oa {
                return true;
            }
        }
    }
    false
}

fn graph_of_events(s: &Scenario, events: &[Event]) -> ExclusivityGraph {
    let mut g = ExclusivityGraph::new(events.len());
    for i in 0..events.len() {
        for j in (i + 1)..events.len() {
            if events_exclusive(&events[i], &events[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g.with_labels(events.iter().map(|e| e.label(s)).collect())
}

/// The graph of exclusivity of a scenario's maximal-context events.
pub fn exclusivity_graph(s: &Scenario) -> ExclusivityGraph {
    graph_of_events(s, &scenario_events(s))
}

/// Variant including the events of every nonempty context, not only the
/// maximal ones.
pub fn exclusivity_graph_all_contexts(s: &Scenario) -> ExclusivityGraph {
    use crate::scenario::joint_outcomes;
    use std::collections::BTreeSet;
    // All nonempty sub-contexts of the measured maximal contexts.
    let mut subs: BTreeSet<Vec<usize>> = BTreeSet::new();
    for ctx in s.maximal_contexts() {
        let members = ctx.members();
        for mask in 1u32..(1 << members.len()) {
            let subset: Vec<usize> = members
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &m)| m)
                .collect();
            subs.insert(subset);
        }
    }
    let mut events = Vec::new();
    for members in subs {
        let ctx = Context::new(s, &members).expect("sub-context is a clique");
        let dims = ctx.outcome_dims(s);
        let len: usize = dims.iter().product();
        for idx in 0..len {
            let outs = joint_outcomes(&dims, idx);
            events.push(Event::new(s, ctx.clone(), outs).expect("valid event"));
        }
    }
    graph_of_events(s, &events)
}

/// Read a behaviour off as vertex weights of its exclusivity graph: the
/// weight of each vertex is the probability of that vertex's event.
pub fn behaviour_to_weights(
    b: &Behaviour,
    g: &ExclusivityGraph,
) -> Result<VertexWeights, ExgraphError> {
    let labels = g.labels().ok_or(ExgraphError::NoLabels)?;
    let s = b.scenario();
    let mut weights = Vec::with_capacity(g.len());
    for label in labels {
        let ev = Event::parse_label(s, label)
            .map_err(|_| ExgraphError::LabelMismatch(label.clone()))?;
        let p = b.probability(&ev).map_err(|_| ExgraphError::LabelMismatch(label.clone()))?;
        weights.push(p.clamp(0.0, 1.0));
    }
    VertexWeights::new(weights)
}

/// Complement graph: same vertices (and labels), complementary edges.
pub fn complement(g: &ExclusivityGraph) -> ExclusivityGraph {
    let mut out = ExclusivityGraph::new(g.len());
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            if !g.adjacent(i, j) {
                out.add_edge(i, j);
            }
        }
    }
    out.labels = g.labels.clone();
    out
}

/// OR (disjunctive / co-normal) product: vertices are pairs in row-major
/// order, edge iff either coordinate pair is an edge.
pub fn or_product(
    g: &ExclusivityGraph,
    h: &ExclusivityGraph,
) -> Result<ExclusivityGraph, ExgraphError> {
    or_product_capped(g, h, DEFAULT_OR_CAP)
}

pub fn or_product_capped(
    g: &ExclusivityGraph,
    h: &ExclusivityGraph,
    cap: usize,
) -> Result<ExclusivityGraph, ExgraphError> {
    let n = g.len().checked_mul(h.len()).unwrap_or(usize::MAX);
    if n > cap {
        return Err(ExgraphError::OrCapExceeded { required: n, cap });
    }
    let nh = h.len();
    let mut out = ExclusivityGraph::new(n);
    for u in 0..n {
        let (i, ip) = (u / nh, u % nh);
        for v in (u + 1)..n {
            let (j, jp) = (v / nh, v % nh);
            if g.adjacent(i, j) || h.adjacent(ip, jp) {
                out.add_edge(u, v);
            }
        }
    }
    Ok(out)
}

/// n-fold OR power with vertex order aligned to [`tensor_weights`].
pub fn or_power(g: &ExclusivityGraph, n: usize) -> Result<ExclusivityGraph, ExgraphError> {
    or_power_capped(g, n, DEFAULT_OR_CAP)
}

pub fn or_power_capped(
    g: &ExclusivityGraph,
    n: usize,
    cap: usize,
) -> Result<ExclusivityGraph, ExgraphError> {
    if n == 0 {
        return Err(ExgraphError::ZeroPower);
    }
    let mut size = 1usize;
    for _ in 0..n {
        size = size.checked_mul(g.len()).unwrap_or(usize::MAX);
        if size > cap {
            return Err(ExgraphError::OrCapExceeded { required: size, cap });
        }
    }
    let mut acc = g.clone();
    acc.labels = None;
    for _ in 1..n {
        acc = or_product_capped(&acc, g, cap)?;
    }
    Ok(acc)
}

/// w^{⊗n} in the row-major order of [`or_power`].
pub fn tensor_weights(w: &VertexWeights, n: usize) -> VertexWeights {
    assert!(n >= 1);
    let base = w.as_slice();
    let mut acc: Vec<f64> = base.to_vec();
    for _ in 1..n {
        let mut next = Vec::with_capacity(acc.len() * base.len());
        for &a in &acc {
            for &b in base {
                next.push(a * b);
            }
        }
        acc = next;
    }
    VertexWeights::new(acc).expect("products of [0,1] weights stay in range")
}

/// Self-complementarity: a witness bijection onto the complement, if any.
pub fn is_self_complementary(g: &ExclusivityGraph) -> Result<Option<Vec<usize>>, IsoError> {
    find_isomorphism(g, &complement(g))
}

/// The 4n-vertex embedding with blocks B1 = G, B2 = complement, B3 =
/// complement, B4 = G and complete joins between consecutive blocks. Labels
/// record block membership as "b{k}:{i}". The result is self-complementary
/// with explicit witness [`h_embedding_witness`].
pub fn h_embedding(g: &ExclusivityGraph) -> ExclusivityGraph {
    let n = g.len();
    let gc = complement(g);
    let mut out = ExclusivityGraph::new(4 * n);
    let block = |k: usize, i: usize| k * n + i;
    for k in 0..4usize {
        let pattern = if k == 0 || k == 3 { g } else { &gc };
        for i in 0..n {
            for j in (i + 1)..n {
                if pattern.adjacent(i, j) {
                    out.add_edge(block(k, i), block(k, j));
                }
            }
        }
    }
    for k in 0..3usize {
        for i in 0..n {
            for j in 0..n {
                out.add_edge(block(k, i), block(k + 1, j));
            }
        }
    }
    let labels = (0..4)
        .flat_map(|k| (0..n).map(move |i| format!("b{}:{}", k + 1, i)))
        .collect();
    out.with_labels(labels)
}

/// The block permutation (B1,B2,B3,B4) → (B2,B4,B1,B3) with identity inner
/// maps: an explicit self-complementarity witness for every h_embedding.
pub fn h_embedding_witness(n: usize) -> Vec<usize> {
    let sigma = [1usize, 3, 0, 2];
    (0..4 * n).map(|v| sigma[v / n] * n + v % n).collect()
}

#[cfg(test)]
mod tests;
