use super::*;
use crate::scenario::{catalog_get, chsh_scenario, chsh_value, tensor_behaviours, Scenario};
use approx::assert_abs_diff_eq;
use std::f64::consts::SQRT_2;

fn trivial_realization() -> (Realization, Scenario) {
    let s = Scenario::new(vec![("m".into(), 2)], vec![]).unwrap();
    let mut projectors = BTreeMap::new();
    projectors.insert(("m".to_string(), 0), CMatrix::from_element(1, 1, c(1.0)));
    projectors.insert(("m".to_string(), 1), CMatrix::from_element(1, 1, c(0.0)));
    let state = CVector::from_element(1, c(1.0));
    (Realization { dim: 1, state, projectors }, s)
}

#[test]
fn trivial_dimension_one_realization_validates() {
    let (r, s) = trivial_realization();
    let report = validate_realization(&r, &s).unwrap();
    assert!(report.pass, "worst residual {}", report.worst());
}

#[test]
fn tsirelson_realization_validates_tightly() {
    let r = tsirelson_realization();
    let report = validate_realization(&r, &chsh_scenario()).unwrap();
    assert!(report.pass);
    assert!(report.worst() <= 1e-12, "worst residual {}", report.worst());
}

#[test]
fn injected_idempotence_noise_is_reported() {
    let mut r = tsirelson_realization();
    let e = r.projectors.get_mut(&("x0".to_string(), 0)).unwrap();
    e[(0, 0)] += c(1e-3);
    let report = validate_realization(&r, &chsh_scenario()).unwrap();
    assert!(!report.pass);
    assert!(
        report.idempotence > 5e-4 && report.idempotence < 5e-3,
        "idempotence residual {}",
        report.idempotence
    );
}

#[test]
fn missing_projector_is_an_error() {
    let (mut r, s) = trivial_realization();
    r.projectors.remove(&("m".to_string(), 1));
    assert!(matches!(
        validate_realization(&r, &s),
        Err(QuantumError::MissingProjector { .. })
    ));
}

#[test]
fn trivial_realization_yields_deterministic_behaviour() {
    let (r, s) = trivial_realization();
    let b = behaviour_from_realization(&r, &s).unwrap();
    let stacked = b.stacked();
    assert_eq!(stacked, vec![1.0, 0.0]);
}

#[test]
fn tsirelson_behaviour_attains_2_sqrt_2() {
    let b = tsirelson_behaviour();
    assert_abs_diff_eq!(chsh_value(&b), 2.0 * SQRT_2, epsilon = 1e-9);
    assert!(crate::scenario::check_normalization(&b, 1e-9).pass);
    assert!(crate::scenario::check_nondisturbance(&b, 1e-9).pass);
}

#[test]
fn product_realization_evaluates_to_tensor_behaviour() {
    // One qubit measurement per side, disjoint ids.
    let z = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let x = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let build = |id: &str, obs: &CMatrix, amp: (f64, f64)| -> (Realization, Scenario) {
        let s = Scenario::new(vec![(id.into(), 2)], vec![]).unwrap();
        let eye = CMatrix::identity(2, 2);
        let e0 = (&eye + obs) * c(0.5);
        let e1 = (&eye - obs) * c(0.5);
        let mut projectors = BTreeMap::new();
        projectors.insert((id.to_string(), 0), e0);
        projectors.insert((id.to_string(), 1), e1);
        let mut state = CVector::zeros(2);
        state[0] = c(amp.0);
        state[1] = c(amp.1);
        let n = state.norm();
        state /= c(n);
        (Realization { dim: 2, state, projectors }, s)
    };
    let (ra, sa) = build("a", &z, (0.6, 0.8));
    let (rb, sb) = build("b", &x, (1.0, 0.5));
    let rt = tensor_realizations(&ra, &sa, &rb, &sb).unwrap();

    let ba = behaviour_from_realization(&ra, &sa).unwrap();
    let bb = behaviour_from_realization(&rb, &sb).unwrap();
    let expected = tensor_behaviours(&ba, &bb).unwrap();
    let st = expected.scenario().clone();
    let got = behaviour_from_realization(&rt, &st).unwrap();
    for (x, y) in got.stacked().iter().zip(expected.stacked().iter()) {
        assert_abs_diff_eq!(x, y, epsilon = 1e-12);
    }
}

#[test]
fn coarse_grain_full_merge_gives_identity_projector() {
    let r = tsirelson_realization();
    let part = CoarseGrainingPartition { measurement: "x0".into(), blocks: vec![vec![0, 1]] };
    let coarse = coarse_grain_projectors(&r, &part).unwrap();
    let e = coarse.projector("x0", 0).unwrap();
    let eye = CMatrix::identity(4, 4);
    assert!(max_abs(&(e - eye)) <= 1e-12);
}

#[test]
fn coarse_grain_identity_partition_is_noop() {
    let r = tsirelson_realization();
    let part = CoarseGrainingPartition::identity("y1", 2);
    let coarse = coarse_grain_projectors(&r, &part).unwrap();
    for a in 0..2 {
        let before = r.projector("y1", a).unwrap();
        let after = coarse.projector("y1", a).unwrap();
        assert!(max_abs(&(before - after)) == 0.0);
    }
}

#[test]
fn coarse_grain_rejects_bad_partitions() {
    let r = tsirelson_realization();
    for blocks in [vec![vec![0]], vec![vec![0, 0], vec![1]], vec![vec![0, 2], vec![1]]] {
        let part = CoarseGrainingPartition { measurement: "x0".into(), blocks };
        assert!(matches!(
            coarse_grain_projectors(&r, &part),
            Err(QuantumError::InvalidPartition { .. })
        ));
    }
}

#[test]
fn coarse_grain_probabilities_add_per_block() {
    // One 4-outcome measurement in dimension 4, merged 2 + 2.
    let s4 = Scenario::new(vec![("m".into(), 4)], vec![]).unwrap();
    let mut projectors = BTreeMap::new();
    for a in 0..4 {
        let mut e = CMatrix::zeros(4, 4);
        e[(a, a)] = c(1.0);
        projectors.insert(("m".to_string(), a), e);
    }
    let mut state = CVector::zeros(4);
    let amps = [0.1, 0.5, 0.3, 0.8];
    for (i, &a) in amps.iter().enumerate() {
        state[i] = c(a);
    }
    let n = state.norm();
    state /= c(n);
    let r = Realization { dim: 4, state, projectors };
    let b4 = behaviour_from_realization(&r, &s4).unwrap();
    let p4 = b4.stacked();

    let part = CoarseGrainingPartition { measurement: "m".into(), blocks: vec![vec![0, 3], vec![1, 2]] };
    let coarse = coarse_grain_projectors(&r, &part).unwrap();
    let s2 = Scenario::new(vec![("m".into(), 2)], vec![]).unwrap();
    let b2 = behaviour_from_realization(&coarse, &s2).unwrap();
    let p2 = b2.stacked();
    assert_abs_diff_eq!(p2[0], p4[0] + p4[3], epsilon = 1e-12);
    assert_abs_diff_eq!(p2[1], p4[1] + p4[2], epsilon = 1e-12);
}

#[test]
fn tsirelson_realization_is_ideal_including_coarse_grainings() {
    let r = tsirelson_realization();
    let report = check_ideal(&r, &chsh_scenario()).unwrap();
    assert!(report.pass, "{report:?}");
    assert!(report.repeatability <= 1e-10);
    assert!(report.order_invariance <= 1e-10);
    // Two partitions per binary measurement, four measurements.
    assert_eq!(report.coarse_grainings_checked, 8);
}

#[test]
fn non_idempotent_injection_fails_ideality_gate() {
    let mut r = tsirelson_realization();
    let e = r.projectors.get_mut(&("x1".to_string(), 0)).unwrap();
    e[(0, 0)] += c(1e-3);
    assert!(matches!(
        check_ideal(&r, &chsh_scenario()),
        Err(QuantumError::ValidationFailed { .. })
    ));
}

#[test]
fn seesaw_hits_deterministic_target_in_dimension_one() {
    let b = catalog_get("deterministic_chsh").unwrap();
    let opts = SeesawOptions { restarts: 2, iterations: 30, ..Default::default() };
    let fit = seesaw_fit(b.scenario(), &b, 1, &opts).unwrap();
    assert!(fit.distance <= 1e-12, "distance {}", fit.distance);
    let report = validate_realization(&fit.realization, b.scenario()).unwrap();
    assert!(report.pass);
}

#[test]
fn seesaw_recovers_tsirelson_point_in_dimension_four() {
    let b = catalog_get("tsirelson_chsh").unwrap();
    let fit = seesaw_fit(b.scenario(), &b, 4, &SeesawOptions::default()).unwrap();
    assert!(fit.distance < 1e-6, "distance {}", fit.distance);
    let report = validate_realization(&fit.realization, b.scenario()).unwrap();
    assert!(report.pass, "worst {}", report.worst());
}

#[test]
fn seesaw_distance_trace_is_non_increasing() {
    let b = catalog_get("tsirelson_chsh").unwrap();
    let opts = SeesawOptions { restarts: 2, iterations: 40, ..Default::default() };
    let fit = seesaw_fit(b.scenario(), &b, 4, &opts).unwrap();
    for w in fit.distance_trace.windows(2) {
        assert!(w[1] <= w[0] + 1e-15);
    }
}

#[test]
fn seesaw_cannot_approach_pr_box() {
    let b = catalog_get("pr_box").unwrap();
    for d in [2usize, 4, 6] {
        let opts = SeesawOptions { restarts: 4, iterations: 60, ..Default::default() };
        let fit = seesaw_fit(b.scenario(), &b, d, &opts).unwrap();
        assert!(fit.distance > 0.05, "d = {d}: distance {}", fit.distance);
    }
}

#[test]
fn seesaw_rejects_non_multipartite_scenarios() {
    let s = crate::scenario::cycle_scenario(5);
    let b = catalog_get("wright_pentagon").unwrap();
    assert!(matches!(
        seesaw_fit(&s, &b, 3, &SeesawOptions::default()),
        Err(QuantumError::UnsupportedScenario { .. })
    ));
}

#[test]
fn npa_level1_refutes_pr_box_with_reverifiable_certificate() {
    let b = catalog_get("pr_box").unwrap();
    match npa_infeasibility(b.scenario(), &b, 1).unwrap() {
        NpaOutcome::Infeasible { certificate } => {
            assert!(certificate.margin > 1e-6);
            assert!(verify_npa_certificate(b.scenario(), &b, &certificate));
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn npa_accepts_tsirelson_at_both_levels() {
    let b = catalog_get("tsirelson_chsh").unwrap();
    for level in [1, 2] {
        match npa_infeasibility(b.scenario(), &b, level).unwrap() {
            NpaOutcome::Feasible { .. } => {}
            other => panic!("level {level}: expected feasible, got {other:?}"),
        }
    }
}

#[test]
fn npa_level1_accepts_almost_quantum_point() {
    // The level-1 word list includes the context moments, which is exactly
    // the relaxation this behaviour was built to satisfy.
    let b = catalog_get("almost_quantum_chsh").unwrap();
    match npa_infeasibility(b.scenario(), &b, 1).unwrap() {
        NpaOutcome::Feasible { .. } => {}
        other => panic!("expected feasible, got {other:?}"),
    }
}

#[test]
fn npa_accepts_deterministic_behaviour() {
    let b = catalog_get("deterministic_chsh").unwrap();
    match npa_infeasibility(b.scenario(), &b, 2).unwrap() {
        NpaOutcome::Feasible { .. } => {}
        other => panic!("expected feasible, got {other:?}"),
    }
}

#[test]
fn npa_rejects_unsupported_level() {
    let b = catalog_get("pr_box").unwrap();
    assert!(npa_infeasibility(b.scenario(), &b, 3).is_err());
}

#[test]
fn constraint_c_tsirelson_is_quantum() {
    let b = catalog_get("tsirelson_chsh").unwrap();
    match constraint_c_verdict(&b, 4, 1, 0).unwrap() {
        ConstraintCVerdict::Quantum { dimension, distance, .. } => {
            assert!(distance < QUANTUM_DISTANCE_TOL);
            assert!(dimension <= 4);
        }
        other => panic!("expected quantum, got {other:?}"),
    }
}

#[test]
fn constraint_c_pr_box_is_non_quantum() {
    let b = catalog_get("pr_box").unwrap();
    match constraint_c_verdict(&b, 2, 1, 0).unwrap() {
        ConstraintCVerdict::NonQuantum { certificate, best_distance, .. } => {
            assert!(best_distance > 0.05);
            assert!(verify_npa_certificate(b.scenario(), &b, &certificate));
        }
        other => panic!("expected non-quantum, got {other:?}"),
    }
}

#[test]
fn realization_json_round_trip() {
    let r = tsirelson_realization();
    let json = serde_json::to_string(&r).unwrap();
    let back: Realization = serde_json::from_str(&json).unwrap();
    assert_eq!(back.dim, 4);
    assert!(max_abs(&(&back.state * back.state.adjoint() - &r.state * r.state.adjoint())) <= 1e-15);
    for (k, e) in &r.projectors {
        let f = back.projectors.get(k).unwrap();
        assert!(max_abs(&(e - f)) <= 1e-15);
    }
}

#[test]
fn quantum_behaviour_lands_in_theta_body_of_chsh_graph() {
    // Quantum points respect the theta body (membership direction).
    let b = tsirelson_behaviour();
    let g = crate::exgraph::exclusivity_graph(b.scenario());
    let w = crate::exgraph::behaviour_to_weights(&b, &g).unwrap();
    match crate::thetabody::in_theta_body(&g, &w).unwrap() {
        crate::thetabody::ThetaVerdict::Member(cert) => {
            assert!(crate::thetabody::verify_theta_certificate(&g, &w, &cert));
        }
        other => panic!("expected member, got {other:?}"),
    }
}
