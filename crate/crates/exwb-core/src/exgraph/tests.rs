use super::*;
use crate::scenario::{catalog_get, chsh_scenario, cycle_scenario, Scenario};
use proptest::prelude::*;

/// Independent oracle for the CHSH exclusivity rule: events (a,b|x,y) are
/// exclusive iff (x = x' and a ≠ a') or (y = y' and b ≠ b').
fn chsh_rule_oracle() -> Vec<Vec<bool>> {
    // Events ordered context-major: (x,y) in order (0,0),(0,1),(1,0),(1,1),
    // outcomes (a,b) lexicographic. Matches the canonical vertex order of
    // exclusivity_graph(chsh_scenario()).
    let events: Vec<(usize, usize, usize, usize)> = {
        let mut v = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        v.push((x, y, a, b));
                    }
                }
            }
        }
        v
    };
    let mut adj = vec![vec![false; 16]; 16];
    for i in 0..16 {
        for j in 0..16 {
            if i == j {
                continue;
            }
            let (x1, y1, a1, b1) = events[i];
            let (x2, y2, a2, b2) = events[j];
            adj[i][j] = (x1 == x2 && a1 != a2) || (y1 == y2 && b1 != b2);
        }
    }
    adj
}

#[test]
fn chsh_graph_matches_rule_oracle_exactly() {
    let g = exclusivity_graph(&chsh_scenario());
    assert_eq!(g.len(), 16);
    assert_eq!(g.edge_count(), 56);
    for v in 0..16 {
        assert_eq!(g.degree(v), 7, "vertex {v}");
    }
    let oracle = chsh_rule_oracle();
    for i in 0..16 {
        for j in 0..16 {
            assert_eq!(g.adjacent(i, j), oracle[i][j], "pair ({i},{j})");
        }
    }
}

#[test]
fn single_binary_measurement_gives_k2() {
    let s = Scenario::new(vec![("m".into(), 2)], vec![]).unwrap();
    let g = exclusivity_graph(&s);
    assert_eq!(g.len(), 2);
    assert_eq!(g.edge_count(), 1);
    assert!(g.adjacent(0, 1));
}

#[test]
fn specker_triangle_graph_has_12_vertices_and_odd_triangle() {
    let s = cycle_scenario(3);
    let g = exclusivity_graph(&s);
    assert_eq!(g.len(), 12);
    let labels = g.labels().unwrap();
    // The three "different outcomes everywhere" events are pairwise
    // exclusive: (01|12), (01|23) and, in canonical {1,3} order, (10|13).
    let find = |l: &str| labels.iter().position(|x| x == l).unwrap();
    let v1 = find("0,1|1,2");
    let v2 = find("0,1|2,3");
    let v3 = find("1,0|1,3");
    assert!(g.adjacent(v1, v2));
    assert!(g.adjacent(v2, v3));
    assert!(g.adjacent(v1, v3));
}

#[test]
fn specker_weights_are_halves_on_mixed_events() {
    let b = catalog_get("specker_triangle").unwrap();
    let g = exclusivity_graph(b.scenario());
    let w = behaviour_to_weights(&b, &g).unwrap();
    let labels = g.labels().unwrap();
    for (v, l) in labels.iter().enumerate() {
        let expected = if l.starts_with("0,1") || l.starts_with("1,0") { 0.5 } else { 0.0 };
        assert_eq!(w[v], expected, "label {l}");
    }
}

#[test]
fn deterministic_weights_have_four_ones() {
    let b = catalog_get("deterministic_chsh").unwrap();
    let g = exclusivity_graph(b.scenario());
    let w = behaviour_to_weights(&b, &g).unwrap();
    let ones = (0..g.len()).filter(|&v| w[v] == 1.0).count();
    let zeros = (0..g.len()).filter(|&v| w[v] == 0.0).count();
    assert_eq!(ones, 4);
    assert_eq!(zeros, 12);
}

#[test]
fn pr_weights_are_eight_halves() {
    let b = catalog_get("pr_box").unwrap();
    let g = exclusivity_graph(b.scenario());
    let w = behaviour_to_weights(&b, &g).unwrap();
    let halves = (0..g.len()).filter(|&v| w[v] == 0.5).count();
    let zeros = (0..g.len()).filter(|&v| w[v] == 0.0).count();
    assert_eq!(halves, 8);
    assert_eq!(zeros, 8);
}

#[test]
fn weights_label_mismatch_is_an_error() {
    let b = catalog_get("pr_box").unwrap();
    let g = ExclusivityGraph::cycle(5).with_labels(
        (0..5).map(|i| format!("v{i}")).collect(),
    );
    assert!(matches!(behaviour_to_weights(&b, &g), Err(ExgraphError::LabelMismatch(_))));
}

#[test]
fn complement_of_c5_is_isomorphic_to_c5() {
    let c5 = ExclusivityGraph::cycle(5);
    let comp = complement(&c5);
    assert_eq!(comp.edge_count(), 5);
    let iso = find_isomorphism(&c5, &comp).unwrap().expect("pentagon ≅ pentagram");
    assert!(verify_isomorphism(&c5, &comp, &iso));
}

#[test]
fn complement_of_k2_is_edgeless() {
    let k2 = ExclusivityGraph::complete(2);
    let c = complement(&k2);
    assert_eq!(c.edge_count(), 0);
}

#[test]
fn complement_of_c7_has_14_edges() {
    let c7 = ExclusivityGraph::cycle(7);
    assert_eq!(complement(&c7).edge_count(), 14);
}

#[test]
fn k2_or_k2_is_k4() {
    let k2 = ExclusivityGraph::complete(2);
    let p = or_product(&k2, &k2).unwrap();
    assert_eq!(p.len(), 4);
    assert_eq!(p.edge_count(), 6);
}

/// Brute-force maximum clique by recursive enumeration (oracle, no pruning).
fn brute_force_max_clique(g: &ExclusivityGraph) -> usize {
    fn rec(g: &ExclusivityGraph, start: usize, current: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(current.len());
        for v in start..g.len() {
            if current.iter().all(|&u| g.adjacent(u, v)) {
                current.push(v);
                rec(g, v + 1, current, best);
                current.pop();
            }
        }
    }
    let mut best = 0;
    rec(g, 0, &mut Vec::new(), &mut best);
    best
}

#[test]
fn or_square_of_c5_has_clique_number_5() {
    let c5 = ExclusivityGraph::cycle(5);
    let sq = or_power(&c5, 2).unwrap();
    assert_eq!(sq.len(), 25);
    assert_eq!(brute_force_max_clique(&sq), 5);
}

#[test]
fn edgeless_or_edgeless_is_edgeless() {
    let a = ExclusivityGraph::edgeless(3);
    let b = ExclusivityGraph::edgeless(4);
    let p = or_product(&a, &b).unwrap();
    assert_eq!(p.len(), 12);
    assert_eq!(p.edge_count(), 0);
}

#[test]
fn or_cap_error_names_required_size() {
    let a = ExclusivityGraph::edgeless(400);
    match or_product(&a, &a) {
        Err(ExgraphError::OrCapExceeded { required, cap }) => {
            assert_eq!(required, 160_000);
            assert_eq!(cap, DEFAULT_OR_CAP);
        }
        other => panic!("expected cap error, got {other:?}"),
    }
}

#[test]
fn k3_vs_path3_no_isomorphism() {
    let k3 = ExclusivityGraph::complete(3);
    let p3 = ExclusivityGraph::from_edges(3, &[(0, 1), (1, 2)]);
    assert!(find_isomorphism(&k3, &p3).unwrap().is_none());
}

#[test]
fn graph_is_isomorphic_to_itself() {
    let g = ExclusivityGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)]);
    let iso = find_isomorphism(&g, &g).unwrap().expect("identity works");
    assert!(verify_isomorphism(&g, &g, &iso));
}

#[test]
fn c5_is_self_complementary_c7_is_not() {
    assert!(is_self_complementary(&ExclusivityGraph::cycle(5)).unwrap().is_some());
    assert!(is_self_complementary(&ExclusivityGraph::cycle(7)).unwrap().is_none());
}

#[test]
fn h_embedding_of_c7_is_self_complementary_with_verified_witness() {
    let h = h_embedding(&ExclusivityGraph::cycle(7));
    assert_eq!(h.len(), 28);
    assert_eq!(h.edge_count(), 189);
    let found = is_self_complementary(&h).unwrap().expect("witness");
    assert!(verify_isomorphism(&h, &complement(&h), &found));
    // The explicit block witness also verifies.
    let block = h_embedding_witness(7);
    assert!(verify_isomorphism(&h, &complement(&h), &block));
}

#[test]
fn h_embedding_of_k1_is_p4() {
    let h = h_embedding(&ExclusivityGraph::new(1));
    assert_eq!(h.len(), 4);
    assert_eq!(h.edge_count(), 3);
    assert!(h.adjacent(0, 1) && h.adjacent(1, 2) && h.adjacent(2, 3));
    assert!(is_self_complementary(&h).unwrap().is_some());
}

#[test]
fn iso_size_cap() {
    let g = ExclusivityGraph::edgeless(65);
    assert!(matches!(
        find_isomorphism(&g, &g),
        Err(IsoError::SizeCapExceeded { .. })
    ));
}

#[test]
fn tensor_weights_align_with_or_power_order() {
    let w = VertexWeights::new(vec![0.5, 0.25, 1.0]).unwrap();
    let t = tensor_weights(&w, 2);
    assert_eq!(t.len(), 9);
    // Row-major: (i, j) -> 3i + j.
    assert_eq!(t[3 * 1 + 2], 0.25);
    assert_eq!(t[3 * 2 + 0], 0.5);
}

#[test]
fn dot_output_contains_all_edges() {
    let g = ExclusivityGraph::cycle(4).with_labels(
        (0..4).map(|i| format!("e{i}")).collect(),
    );
    let dot = g.to_dot("c4");
    assert!(dot.starts_with("graph c4 {"));
    assert_eq!(dot.matches(" -- ").count(), 4);
    assert!(dot.contains("label=\"e0\""));
}

#[test]
fn graph_json_round_trip() {
    let g = exclusivity_graph(&chsh_scenario());
    let json = serde_json::to_string(&g).unwrap();
    let back: ExclusivityGraph = serde_json::from_str(&json).unwrap();
    assert_eq!(g, back);
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = ExclusivityGraph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut g = ExclusivityGraph::new(n);
        let mut state = seed | 1;
        for i in 0..n {
            for j in (i + 1)..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 63 == 1 {
                    g.add_edge(i, j);
                }
            }
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complement_is_an_involution(g in arb_graph(12)) {
        prop_assert_eq!(complement(&complement(&g)), g);
    }

    #[test]
    fn or_power_one_is_identity(g in arb_graph(8)) {
        let mut unlabeled = g.clone();
        unlabeled = unlabeled.induced(&(0..g.len()).collect::<Vec<_>>());
        prop_assert_eq!(or_power(&g, 1).unwrap(), unlabeled);
    }

    #[test]
    fn or_product_is_associative_in_row_major_order(
        a in arb_graph(4), b in arb_graph(4), c in arb_graph(4)
    ) {
        let left = or_product(&or_product(&a, &b).unwrap(), &c).unwrap();
        let right = or_product(&a, &or_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn h_embedding_edge_count_formula(g in arb_graph(10)) {
        let n = g.len();
        let h = h_embedding(&g);
        prop_assert_eq!(h.len(), 4 * n);
        prop_assert_eq!(h.edge_count(), 4 * n * n - n);
        // Exactly half of all pairs: necessary for self-complementarity.
        prop_assert_eq!(2 * h.edge_count(), (4 * n) * (4 * n - 1) / 2);
    }

    #[test]
    fn h_embedding_block_witness_always_verifies(g in arb_graph(10)) {
        let h = h_embedding(&g);
        let witness = h_embedding_witness(g.len());
        prop_assert!(verify_isomorphism(&h, &complement(&h), &witness));
    }

    #[test]
    fn h_embedding_self_complementary_by_search(g in arb_graph(10)) {
        let h = h_embedding(&g);
        let found = is_self_complementary(&h).unwrap();
        prop_assert!(found.is_some());
        prop_assert!(verify_isomorphism(&h, &complement(&h), &found.unwrap()));
    }
}
