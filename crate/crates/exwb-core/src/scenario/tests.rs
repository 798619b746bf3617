use super::*;
use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use std::f64::consts::SQRT_2;

fn ctx(s: &Scenario, ids: &[&str]) -> Context {
    Context::from_ids(s, ids).unwrap()
}

#[test]
fn chsh_maximal_contexts_form_the_square() {
    let s = chsh_scenario();
    let contexts = enumerate_contexts(&s, true);
    let keys: Vec<String> = contexts.iter().map(|c| c.key(&s)).collect();
    assert_eq!(keys, vec!["x0,y0", "x0,y1", "x1,y0", "x1,y1"]);
}

#[test]
fn single_measurement_has_one_maximal_context() {
    let s = Scenario::new(vec![("m".into(), 2)], vec![]).unwrap();
    let contexts = enumerate_contexts(&s, true);
    assert_eq!(contexts.len(), 1);
    assert_eq!(contexts[0].key(&s), "m");
}

#[test]
fn pentagon_maximal_contexts_are_adjacent_pairs() {
    let s = cycle_scenario(5);
    let contexts = enumerate_contexts(&s, true);
    assert_eq!(contexts.len(), 5);
    for c in &contexts {
        assert_eq!(c.len(), 2);
    }
}

#[test]
fn all_contexts_include_subsets_of_maximal_cliques() {
    // Constraint (A) remark: any subset of a context is again a context.
    let s = cycle_scenario(5);
    let all = enumerate_contexts(&s, false);
    // 5 singletons + 5 edges.
    assert_eq!(all.len(), 10);
    for c in &all {
        assert!(Context::new(&s, c.members()).is_ok());
    }
}

#[test]
fn specker_rows_are_normalized() {
    let b = catalog_get("specker_triangle").unwrap();
    let r = check_normalization(&b, 1e-12);
    assert!(r.pass, "worst deviation {}", r.worst_deviation);
}

#[test]
fn constructed_deficit_fails_normalization() {
    let s = Scenario::new(
        vec![("a".into(), 2), ("b".into(), 2)],
        vec![("a".into(), "b".into())],
    )
    .unwrap();
    let b = Behaviour::from_rows(s, vec![(vec!["a", "b"], vec![0.5, 0.4, 0.0, 0.0])]).unwrap();
    let r = check_normalization(&b, 1e-9);
    assert!(!r.pass);
    assert_abs_diff_eq!(r.worst_deviation, 0.1, epsilon = 1e-12);
}

#[test]
fn almost_quantum_rows_sum_to_one_exactly() {
    let b = catalog_get("almost_quantum_chsh").unwrap();
    let r = check_normalization(&b, 1e-12);
    assert!(r.pass, "worst deviation {}", r.worst_deviation);
}

#[test]
fn pr_box_is_nondisturbing_with_uniform_marginals() {
    let b = catalog_get("pr_box").unwrap();
    let r = check_nondisturbance(&b, 1e-12);
    assert!(r.pass);
    assert_eq!(r.pairs_checked, 4); // each measurement sits in two contexts
    // Direct-summation oracle: every single-measurement marginal is 1/2.
    let s = b.scenario();
    for (c, table) in b.tables() {
        let dims = c.outcome_dims(s);
        for pos in 0..2 {
            let marg = marginal_from_table(table, &dims, &[pos]);
            assert_abs_diff_eq!(marg[0], 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(marg[1], 0.5, epsilon = 1e-15);
        }
    }
}

#[test]
fn signalling_behaviour_fails_nondisturbance_on_x0() {
    let s = chsh_scenario();
    let b = Behaviour::from_rows(
        s,
        vec![
            (vec!["x0", "y0"], vec![1.0, 0.0, 0.0, 0.0]),
            (vec!["x0", "y1"], vec![0.0, 0.0, 0.5, 0.5]),
            (vec!["x1", "y0"], vec![0.25; 4]),
            (vec!["x1", "y1"], vec![0.25; 4]),
        ],
    )
    .unwrap();
    let r = check_nondisturbance(&b, 1e-9);
    assert!(!r.pass);
    assert_abs_diff_eq!(r.max_mismatch, 1.0, epsilon = 1e-12);
    assert!(r.witnesses.iter().any(|w| w.measurement == "x0"));
}

#[test]
fn almost_quantum_is_nondisturbing() {
    let b = catalog_get("almost_quantum_chsh").unwrap();
    let r = check_nondisturbance(&b, 1e-12);
    assert!(r.pass, "max mismatch {}", r.max_mismatch);
}

#[test]
fn marginalize_pr_context_to_single_measurement() {
    let b = catalog_get("pr_box").unwrap();
    let s = b.scenario();
    let c = ctx(s, &["x0", "y0"]);
    let sub = ctx(s, &["x0"]);
    let m = marginalize(&b, &c, &sub).unwrap();
    assert_eq!(m, vec![0.5, 0.5]);
}

#[test]
fn marginalize_full_context_is_identity() {
    let b = catalog_get("pr_box").unwrap();
    let s = b.scenario();
    let c = ctx(s, &["x0", "y0"]);
    let m = marginalize(&b, &c, &c).unwrap();
    assert_eq!(m, vec![0.5, 0.0, 0.0, 0.5]);
}

#[test]
fn marginalize_uniform_table_to_binary_half_half() {
    let s = Scenario::new(
        vec![("a".into(), 2), ("b".into(), 2)],
        vec![("a".into(), "b".into())],
    )
    .unwrap();
    let b = Behaviour::from_rows(s, vec![(vec!["a", "b"], vec![0.25; 4])]).unwrap();
    let sc = b.scenario().clone();
    let m = marginalize(&b, &ctx(&sc, &["a", "b"]), &ctx(&sc, &["b"])).unwrap();
    assert_eq!(m, vec![0.5, 0.5]);
}

#[test]
fn marginalize_rejects_non_subset() {
    let b = catalog_get("pr_box").unwrap();
    let s = b.scenario().clone();
    let c = ctx(&s, &["x0", "y0"]);
    let other = ctx(&s, &["x1"]);
    assert!(matches!(
        marginalize(&b, &c, &other),
        Err(ScenarioError::SubsetNotContained { .. })
    ));
}

#[test]
fn marginalize_tower_property() {
    // Three mutually compatible binary measurements, one size-3 context.
    let s = Scenario::new(
        vec![("a".into(), 2), ("b".into(), 2), ("c".into(), 2)],
        vec![
            ("a".into(), "b".into()),
            ("a".into(), "c".into()),
            ("b".into(), "c".into()),
        ],
    )
    .unwrap();
    let table = vec![0.05, 0.1, 0.15, 0.2, 0.05, 0.15, 0.1, 0.2];
    let b = Behaviour::from_rows(s, vec![(vec!["a", "b", "c"], table)]).unwrap();
    let s = b.scenario().clone();
    let full = ctx(&s, &["a", "b", "c"]);
    let mid = ctx(&s, &["a", "b"]);
    let tiny = ctx(&s, &["a"]);
    let direct = marginalize(&b, &full, &tiny).unwrap();
    // Two steps: full -> mid table, then sum out b.
    let mid_table = marginalize(&b, &full, &mid).unwrap();
    let two_step = marginal_from_table(&mid_table, &[2, 2], &[0]);
    for (x, y) in direct.iter().zip(&two_step) {
        assert_abs_diff_eq!(x, y, epsilon = 1e-12);
    }
}

#[test]
fn tensor_of_deterministics_is_deterministic() {
    let b = catalog_get("deterministic_chsh").unwrap();
    let t = tensor_behaviours(&b, &b).unwrap();
    for table in t.tables().values() {
        let ones = table.iter().filter(|&&v| v == 1.0).count();
        let zeros = table.iter().filter(|&&v| v == 0.0).count();
        assert_eq!(ones, 1);
        assert_eq!(zeros, table.len() - 1);
    }
}

#[test]
fn tensor_specker_specker_quarters() {
    let b = catalog_get("specker_triangle").unwrap();
    let t = tensor_behaviours(&b, &b).unwrap();
    assert_eq!(t.tables().len(), 9);
    for (c, table) in t.tables() {
        assert_eq!(c.len(), 4);
        assert_eq!(table.len(), 16);
        for &v in table {
            assert!(v == 0.0 || (v - 0.25).abs() < 1e-15, "entry {v}");
        }
        assert_abs_diff_eq!(table.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn tensor_pr_pr_is_product_of_rows() {
    let b = catalog_get("pr_box").unwrap();
    let t = tensor_behaviours(&b, &b).unwrap();
    assert_eq!(t.tables().len(), 16);
    let s = t.scenario();
    // Context {1:x0, 1:y0, 2:x1, 2:y1}: product of (1/2,0,0,1/2) and
    // (0,1/2,1/2,0) under the sorted interleaving of ids.
    let c = ctx(s, &["1:x0", "1:y0", "2:x1", "2:y1"]);
    let table = t.table(&c).unwrap();
    assert_abs_diff_eq!(table.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    // Sorted members: 1:x0, 1:y0, 2:x1, 2:y1 → joint (0,0,0,1) has index 1:
    // P(00|x0y0) * P(01|x1y1) = 1/2 * 1/2.
    assert_abs_diff_eq!(table[1], 0.25, epsilon = 1e-15);
    // Joint (0,0,0,0): 1/2 * 0 = 0.
    assert_abs_diff_eq!(table[0], 0.0, epsilon = 1e-15);
    let norm = check_normalization(&t, 1e-12);
    let nd = check_nondisturbance(&t, 1e-12);
    assert!(norm.pass && nd.pass);
}

#[test]
fn tensor_preserves_constraints_for_catalog_pairs() {
    for (a, b) in [
        ("specker_triangle", "pr_box"),
        ("wright_pentagon", "almost_quantum_chsh"),
        ("pr_box", "deterministic_chsh"),
    ] {
        let t = tensor_behaviours(&catalog_get(a).unwrap(), &catalog_get(b).unwrap()).unwrap();
        assert!(check_normalization(&t, 1e-9).pass, "{a} x {b} normalization");
        assert!(check_nondisturbance(&t, 1e-9).pass, "{a} x {b} nondisturbance");
    }
}

#[test]
fn catalog_specker_matrix() {
    let b = catalog_get("specker_triangle").unwrap();
    assert_eq!(b.tables().len(), 3);
    for table in b.tables().values() {
        assert_eq!(table, &vec![0.0, 0.5, 0.5, 0.0]);
    }
}

#[test]
fn catalog_wright_matrix() {
    let b = catalog_get("wright_pentagon").unwrap();
    assert_eq!(b.tables().len(), 5);
    for table in b.tables().values() {
        assert_eq!(table, &vec![0.0, 0.5, 0.5, 0.0]);
    }
}

#[test]
fn catalog_pr_matrix() {
    let b = catalog_get("pr_box").unwrap();
    let s = b.scenario().clone();
    for ids in [["x0", "y0"], ["x0", "y1"], ["x1", "y0"]] {
        assert_eq!(b.table(&ctx(&s, &ids)).unwrap(), &[0.5, 0.0, 0.0, 0.5]);
    }
    assert_eq!(b.table(&ctx(&s, &["x1", "y1"])).unwrap(), &[0.0, 0.5, 0.5, 0.0]);
}

#[test]
fn catalog_tsirelson_entries_and_value() {
    let b = catalog_get("tsirelson_chsh").unwrap();
    let hi = (2.0 + SQRT_2) / 8.0;
    let lo = (2.0 - SQRT_2) / 8.0;
    for table in b.tables().values() {
        for &v in table {
            assert!(
                (v - hi).abs() < 1e-9 || (v - lo).abs() < 1e-9,
                "entry {v} not of the form (2±√2)/8"
            );
        }
    }
    assert_abs_diff_eq!(chsh_value(&b), 2.0 * SQRT_2, epsilon = 1e-9);
}

#[test]
fn catalog_unknown_name_lists_available() {
    match catalog_get("nope") {
        Err(ScenarioError::UnknownCatalogName { name, available }) => {
            assert_eq!(name, "nope");
            assert!(available.contains(&"pr_box"));
        }
        other => panic!("expected catalog error, got {other:?}"),
    }
}

#[test]
fn catalog_entries_pass_constraints_at_1e12() {
    for name in catalog_names() {
        let b = catalog_get(name).unwrap();
        assert!(check_normalization(&b, 1e-12).pass, "{name} normalization");
        assert!(check_nondisturbance(&b, 1e-12).pass, "{name} nondisturbance");
    }
}

#[test]
fn scenario_validation_errors() {
    assert!(matches!(
        Scenario::new(vec![("a".into(), 1)], vec![]),
        Err(ScenarioError::TooFewOutcomes(_, 1))
    ));
    assert!(matches!(
        Scenario::new(vec![("a".into(), 2), ("a".into(), 2)], vec![]),
        Err(ScenarioError::DuplicateId(_))
    ));
    assert!(matches!(
        Scenario::new(vec![("a".into(), 2)], vec![("a".into(), "a".into())]),
        Err(ScenarioError::SelfCompatibility(_))
    ));
    assert!(matches!(
        Scenario::new(vec![("a".into(), 2)], vec![("a".into(), "b".into())]),
        Err(ScenarioError::UnknownMeasurement(_))
    ));
}

#[test]
fn behaviour_json_round_trip() {
    for name in ["pr_box", "almost_quantum_chsh", "specker_triangle"] {
        let b = catalog_get(name).unwrap();
        let json = serde_json::to_string(&b).unwrap();
        let back: Behaviour = serde_json::from_str(&json).unwrap();
        assert_eq!(b, back, "round trip failed for {name}");
    }
}

proptest! {
    #[test]
    fn scenario_json_round_trip(n in 2usize..6, edges in proptest::collection::vec((0usize..6, 0usize..6), 0..8)) {
        let measurements: Vec<(String, usize)> =
            (0..n).map(|i| (format!("m{i}"), 2 + i % 3)).collect();
        let compatible: Vec<(String, String)> = edges
            .into_iter()
            .filter(|(a, b)| a % n != b % n)
            .map(|(a, b)| (format!("m{}", a % n), format!("m{}", b % n)))
            .collect();
        let s = Scenario::new(measurements, compatible).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: Scenario = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(s, back);
    }

    #[test]
    fn tensor_of_random_normalized_table_keeps_constraints(seed in 0u64..500) {
        // Random normalized single-context behaviour, tensored with Specker.
        let mut v = [0.0f64; 4];
        let mut acc = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        for slot in v.iter_mut() {
            acc = acc.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *slot = ((acc >> 11) as f64 / (1u64 << 53) as f64).max(1e-3);
        }
        let total: f64 = v.iter().sum();
        let table: Vec<f64> = v.iter().map(|x| x / total).collect();
        let s = Scenario::new(
            vec![("p".into(), 2), ("q".into(), 2)],
            vec![("p".into(), "q".into())],
        )
        .unwrap();
        let b = Behaviour::from_rows(s, vec![(vec!["p", "q"], table)]).unwrap();
        let t = tensor_behaviours(&b, &catalog_get("specker_triangle").unwrap()).unwrap();
        prop_assert!(check_normalization(&t, 1e-9).pass);
        prop_assert!(check_nondisturbance(&t, 1e-9).pass);
    }
}
