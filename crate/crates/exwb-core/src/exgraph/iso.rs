//! Graph isomorphism by backtracking with degree and neighbourhood-degree
//! pruning. Deterministic candidate ordering, first-found witness.

use thiserror::Error;

use super::ExclusivityGraph;

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("isomorphism search capped at {cap} vertices; got {n}")]
    SizeCapExceeded { n: usize, cap: usize },
}

const ISO_CAP: usize = 64;

/// Per-vertex invariant: (degree, sorted multiset of neighbour degrees).
fn invariants(g: &ExclusivityGraph) -> Vec<(usize, Vec<usize>)> {
    let degs: Vec<usize> = (0..g.len()).map(|v| g.degree(v)).collect();
    (0..g.len())
        .map(|v| {
            let mut nd: Vec<usize> =
                (0..g.len()).filter(|&u| g.adjacent(v, u)).map(|u| degs[u]).collect();
            nd.sort_unstable();
            (degs[v], nd)
        })
        .collect()
}

/// Edge-preserving bijection g → h, or None. The witness maps vertex `v` of
/// `g` to `mapping[v]` in `h`.
pub fn find_isomorphism(
    g: &ExclusivityGraph,
    h: &ExclusivityGraph,
) -> Result<Option<Vec<usize>>, IsoError> {
    iso_with_seed(g, h, &[])
}

/// Isomorphism search with a forced partial assignment (g-vertex, h-vertex).
pub fn iso_with_seed(
    g: &ExclusivityGraph,
    h: &ExclusivityGraph,
    seed: &[(usize, usize)],
) -> Result<Option<Vec<usize>>, IsoError> {
    let n = g.len();
    if n > ISO_CAP || h.len() > ISO_CAP {
        return Err(IsoError::SizeCapExceeded { n: n.max(h.len()), cap: ISO_CAP });
    }
    if h.len() != n {
        return Ok(None);
    }
    if g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let inv_g = invariants(g);
    let inv_h = invariants(h);
    let mut sorted_g = inv_g.clone();
    let mut sorted_h = inv_h.clone();
    sorted_g.sort();
    sorted_h.sort();
    if sorted_g != sorted_h {
        return Ok(None);
    }

    // Candidate pool per g-vertex: h-vertices sharing the invariant.
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..n).filter(|&w| inv_h[w] == inv_g[v]).collect())
        .collect();

    let mut mapping: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for &(v, w) in seed {
        if v >= n || w >= n || inv_g[v] != inv_h[w] || used[w] || mapping[v].is_some() {
            return Ok(None);
        }
        mapping[v] = Some(w);
        used[w] = true;
    }
    // Seed consistency among itself.
    for &(v, w) in seed {
        for &(v2, w2) in seed {
            if g.adjacent(v, v2) != h.adjacent(w, w2) {
                return Ok(None);
            }
        }
    }

    // Processing order: seeded vertices first, then rarest invariant,
    // preferring vertices with many already-ordered neighbours (keeps the
    // frontier connected).
    let mut order: Vec<usize> = seed.iter().map(|&(v, _)| v).collect();
    let mut placed = vec![false; n];
    for &v in &order {
        placed[v] = true;
    }
    while order.len() < n {
        let mut best: Option<(usize, usize, usize)> = None; // (-mapped_nb, cand, idx) minimized
        for v in 0..n {
            if placed[v] {
                continue;
            }
            let mapped_nb = order.iter().filter(|&&u| g.adjacent(u, v)).count();
            let key = (usize::MAX - mapped_nb, candidates[v].len(), v);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, v) = best.unwrap();
        placed[v] = true;
        order.push(v);
    }

    let depth = seed.len();
    if backtrack(g, h, &order, &candidates, &mut mapping, &mut used, depth) {
        Ok(Some(mapping.into_iter().map(Option::unwrap).collect()))
    } else {
        Ok(None)
    }
}

fn backtrack(
    g: &ExclusivityGraph,
    h: &ExclusivityGraph,
    order: &[usize],
    candidates: &[Vec<usize>],
    mapping: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    depth: usize,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for &w in &candidates[v] {
        if used[w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let m = mapping[u].unwrap();
            g.adjacent(v, u) == h.adjacent(w, m)
        });
        if !consistent {
            continue;
        }
        mapping[v] = Some(w);
        used[w] = true;
        if backtrack(g, h, order, candidates, mapping, used, depth + 1) {
            return true;
        }
        mapping[v] = None;
        used[w] = false;
    }
    false
}

/// Independent edge-by-edge check that `mapping` is an isomorphism g → h.
pub fn verify_isomorphism(g: &ExclusivityGraph, h: &ExclusivityGraph, mapping: &[usize]) -> bool {
    let n = g.len();
    if h.len() != n || mapping.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &w in mapping {
        if w >= n || seen[w] {
            return false;
        }
        seen[w] = true;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if g.adjacent(i, j) != h.adjacent(mapping[i], mapping[j]) {
                return false;
            }
        }
    }
    true
}
