use super::*;
use crate::exgraph::{behaviour_to_weights, exclusivity_graph, h_embedding, ExclusivityGraph};
use crate::polytope::{in_qstab, in_stab};
use crate::scenario::catalog_get;
use approx::assert_abs_diff_eq;

const INV_SQRT_5: f64 = 0.4472135954999579;

#[test]
fn boundary_uniform_point_of_c5_is_member() {
    let g = ExclusivityGraph::cycle(5);
    let w = VertexWeights::uniform(5, INV_SQRT_5);
    match in_theta_body(&g, &w).unwrap() {
        ThetaVerdict::Member(cert) => {
            assert!(verify_theta_certificate(&g, &w, &cert));
            assert!(cert.residuals.gram_min_eigenvalue >= -1e-7);
        }
        other => panic!("expected member, got {other:?}"),
    }
}

#[test]
fn uniform_half_on_c5_is_not_in_theta_body() {
    let g = ExclusivityGraph::cycle(5);
    let w = VertexWeights::uniform(5, 0.5);
    match in_theta_body(&g, &w).unwrap() {
        ThetaVerdict::NonMember { dual, margin } => {
            assert!(margin > 1e-6);
            assert!(verify_theta_nonmember(&g, &w, &dual));
        }
        other => panic!("expected non-member, got {other:?}"),
    }
}

#[test]
fn uniform_45_hundredths_is_not_in_theta_body() {
    let g = ExclusivityGraph::cycle(5);
    let w = VertexWeights::uniform(5, 0.45);
    match in_theta_body(&g, &w).unwrap() {
        ThetaVerdict::NonMember { dual, .. } => {
            assert!(verify_theta_nonmember(&g, &w, &dual));
        }
        other => panic!("expected non-member, got {other:?}"),
    }
}

#[test]
fn zero_weights_are_members() {
    let g = ExclusivityGraph::cycle(5);
    let w = VertexWeights::uniform(5, 0.0);
    match in_theta_body(&g, &w).unwrap() {
        ThetaVerdict::Member(cert) => {
            assert!(verify_theta_certificate(&g, &w, &cert));
        }
        other => panic!("expected member, got {other:?}"),
    }
}

#[test]
fn lovasz_number_of_pentagon() {
    let g = ExclusivityGraph::cycle(5);
    let v = max_linear_over_theta(&g, &[1.0; 5]).unwrap();
    assert_abs_diff_eq!(v, 5.0f64.sqrt(), epsilon = 1e-4);
}

#[test]
fn k2_uniform_direction_gives_one() {
    let g = ExclusivityGraph::complete(2);
    let v = max_linear_over_theta(&g, &[1.0; 2]).unwrap();
    assert_abs_diff_eq!(v, 1.0, epsilon = 1e-6);
}

#[test]
fn edgeless_uniform_direction_gives_n() {
    let g = ExclusivityGraph::edgeless(4);
    let v = max_linear_over_theta(&g, &[1.0; 4]).unwrap();
    assert_abs_diff_eq!(v, 4.0, epsilon = 1e-5);
}

#[test]
fn negative_direction_is_rejected() {
    let g = ExclusivityGraph::cycle(5);
    assert!(matches!(
        max_linear_over_theta(&g, &[1.0, -0.1, 1.0, 1.0, 1.0]),
        Err(ThetaError::NegativeDirection)
    ));
}

#[test]
fn boundary_scale_matches_theta_on_uniform_ray() {
    let g = ExclusivityGraph::cycle(5);
    let s = theta_boundary_scale(&g, &[1.0; 5]).unwrap();
    assert_abs_diff_eq!(s, INV_SQRT_5, epsilon = 1e-5);
}

#[test]
fn antiblocker_duality_on_c5_is_sharp() {
    let g = ExclusivityGraph::cycle(5);
    let report = antiblocker_duality_check(&g, 12, 7).unwrap();
    assert!(report.all_within, "max {}", report.max_value);
    for s in &report.samples {
        assert!(
            (s.max_inner_product - 1.0).abs() <= 2e-4,
            "boundary sample should be sharp, got {}",
            s.max_inner_product
        );
    }
}

#[test]
fn antiblocker_check_rejects_non_self_complementary() {
    let g = ExclusivityGraph::cycle(7);
    assert!(matches!(
        antiblocker_duality_check(&g, 3, 0),
        Err(ThetaError::NotSelfComplementary)
    ));
}

#[test]
fn sandwich_on_c5_uniform_ray() {
    let g = ExclusivityGraph::cycle(5);
    let r = sandwich_report(&g, 2).unwrap();
    assert!(r.chain_ok);
    assert!(r.self_complementary);
    assert_eq!(r.clique_numbers, vec![2, 5]);
    assert_abs_diff_eq!(r.lower, 0.4, epsilon = 1e-12);
    assert_abs_diff_eq!(r.upper[0], 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(r.upper[1], INV_SQRT_5, epsilon = 1e-9);
    assert_abs_diff_eq!(r.theta_uniform, INV_SQRT_5, epsilon = 1e-4);
    assert!(r.lower <= r.theta_uniform && r.theta_uniform <= r.upper[1] + 1e-4);
}

#[test]
fn sandwich_on_k2_collapses() {
    let g = ExclusivityGraph::complete(2);
    let r = sandwich_report(&g, 3).unwrap();
    assert!(r.chain_ok);
    assert!(!r.self_complementary);
    for u in &r.upper {
        assert_abs_diff_eq!(*u, 0.5, epsilon = 1e-9);
    }
    assert_abs_diff_eq!(r.theta_uniform, 0.5, epsilon = 1e-5);
    assert_abs_diff_eq!(r.lower, 0.5, epsilon = 1e-12);
}

#[test]
fn sandwich_rejects_p4() {
    // h_embedding(K1) = P4 is not vertex-transitive.
    let p4 = h_embedding(&ExclusivityGraph::new(1));
    assert!(matches!(sandwich_report(&p4, 2), Err(ThetaError::NotVertexTransitive)));
}

#[test]
fn c5_and_c7_are_vertex_transitive() {
    assert!(is_vertex_transitive(&ExclusivityGraph::cycle(5)).unwrap());
    assert!(is_vertex_transitive(&ExclusivityGraph::cycle(7)).unwrap());
}

#[test]
fn stab_implies_theta_implies_qstab_on_samples() {
    let g = ExclusivityGraph::cycle(7);
    let mut state = 0xFEEDu64;
    for _ in 0..10 {
        let mut w = Vec::with_capacity(7);
        for _ in 0..7 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            w.push(0.55 * ((state >> 11) as f64 / (1u64 << 53) as f64));
        }
        let w = VertexWeights::new(w).unwrap();
        let stab = in_stab(&g, &w).unwrap().member;
        let theta = match in_theta_body(&g, &w).unwrap() {
            ThetaVerdict::Member(_) => true,
            ThetaVerdict::NonMember { .. } => false,
            ThetaVerdict::Inconclusive { reason } => panic!("inconclusive: {reason}"),
        };
        let qstab = in_qstab(&g, &w).unwrap().member;
        assert!(!stab || theta, "STAB ⊆ TH violated at {:?}", w.as_slice());
        assert!(!theta || qstab, "TH ⊆ QSTAB violated at {:?}", w.as_slice());
    }
}

#[test]
fn pr_weights_are_outside_theta_body_of_chsh_graph() {
    let b = catalog_get("pr_box").unwrap();
    let g = exclusivity_graph(b.scenario());
    let w = behaviour_to_weights(&b, &g).unwrap();
    match in_theta_body(&g, &w).unwrap() {
        ThetaVerdict::NonMember { dual, .. } => {
            assert!(verify_theta_nonmember(&g, &w, &dual));
        }
        other => panic!("expected non-member, got {other:?}"),
    }
}

#[test]
fn almost_quantum_weights_are_inside_theta_body() {
    let b = catalog_get("almost_quantum_chsh").unwrap();
    let g = exclusivity_graph(b.scenario());
    let w = behaviour_to_weights(&b, &g).unwrap();
    match in_theta_body(&g, &w).unwrap() {
        ThetaVerdict::Member(cert) => {
            assert!(verify_theta_certificate(&g, &w, &cert));
        }
        other => panic!("expected member, got {other:?}"),
    }
}

#[test]
fn h_embedding_c7_antiblocker_samples_within_tolerance() {
    let h = h_embedding(&ExclusivityGraph::cycle(7));
    let report = antiblocker_duality_check(&h, 6, 11).unwrap();
    assert!(report.all_within, "max {}", report.max_value);
}
