//! The reproducible end-to-end check suite: every criterion the project is
//! judged by, runnable as a library call (the `acceptance` test target and
//! the CLI `paper-suite` subcommand both drive this module).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::SQRT_2;
use std::time::Instant;

use crate::exgraph::{
    behaviour_to_weights, complement, exclusivity_graph, h_embedding, h_embedding_witness,
    is_self_complementary, verify_isomorphism, ExclusivityGraph, VertexWeights,
};
use crate::polytope::{
    antiblocker_max, deterministic_behaviours, enumerate_independent_sets, in_e_n,
    in_local_polytope, in_qstab, in_stab, max_weight_clique, verify_ep_certificate,
    verify_separating_inequality, verify_stab_mixture, Certificate,
    PolytopeSet, EP_TOL,
};
use crate::quantum::{
    check_ideal, constraint_c_verdict, npa_infeasibility, tsirelson_realization,
    validate_realization, verify_npa_certificate, ConstraintCVerdict, NpaOutcome,
};
use crate::scenario::{
    catalog_get, check_nondisturbance, check_normalization, chsh_scenario, chsh_value,
};
use crate::thetabody::{
    in_theta_body, max_linear_over_theta, sandwich_report, verify_theta_certificate,
    verify_theta_nonmember, ThetaVerdict,
};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
    pub seconds: f64,
    /// Exportable evidence (certificates, tables) for the artifact dir.
    pub artifact: serde_json::Value,
}

pub fn criterion_names() -> Vec<&'static str> {
    vec![
        "chsh-exclusivity-graph",
        "specker-triangle-ep",
        "wright-pentagon-ep",
        "pr-box-ep-and-local-polytope",
        "theta-body-of-c5",
        "sandwich-on-c5",
        "h-embedding-self-complementarity",
        "tsirelson-realization",
        "almost-quantum-verdict",
        "chain-inclusion-suite",
        "classicality-hook",
    ]
}

/// Run one criterion (1-based id, matching `criterion_names` order).
pub fn run_criterion(id: usize) -> CriterionResult {
    let start = Instant::now();
    let name = criterion_names()[id - 1];
    let (pass, details, artifact) = match id {
        1 => criterion_chsh_graph(),
        2 => criterion_specker(),
        3 => criterion_wright(),
        4 => criterion_pr_box(),
        5 => criterion_theta_c5(),
        6 => criterion_sandwich(),
        7 => criterion_h_embedding(),
        8 => criterion_tsirelson(),
        9 => criterion_almost_quantum(),
        10 => criterion_chain_suite(),
        11 => criterion_classicality(),
        _ => panic!("criterion ids are 1..=11"),
    };
    CriterionResult { id, name, pass, details, seconds: start.elapsed().as_secs_f64(), artifact }
}

/// Run the whole suite in order.
pub fn run_all() -> Vec<CriterionResult> {
    (1..=11).map(run_criterion).collect()
}

fn criterion_chsh_graph() -> (bool, String, serde_json::Value) {
    let g = exclusivity_graph(&chsh_scenario());
    let mut ok = g.len() == 16 && g.edge_count() == 56;
    for v in 0..g.len() {
        ok &= g.degree(v) == 7;
    }
    // Shared-measurement rule oracle, rebuilt from scratch over the tuples.
    let mut events = Vec::new();
    for x in 0..2usize {
        for y in 0..2usize {
            for a in 0..2usize {
                for b in 0..2usize {
                    events.push((x, y, a, b));
                }
            }
        }
    }
    let mut mismatches = 0usize;
    for i in 0..16 {
        for j in 0..16 {
            let (x1, y1, a1, b1) = events[i];
            let (x2, y2, a2, b2) = events[j];
            let rule = i != j && ((x1 == x2 && a1 != a2) || (y1 == y2 && b1 != b2));
            if rule != g.adjacent(i, j) {
                mismatches += 1;
            }
        }
    }
    ok &= mismatches == 0;
    let details = format!(
        "16 vertices, {} edges, degrees uniform 7, {} oracle mismatches",
        g.edge_count(),
        mismatches
    );
    let artifact = json!({"n": g.len(), "edges": g.edge_count(), "mismatches": mismatches});
    (ok, details, artifact)
}

fn ep_criterion(
    catalog_name: &str,
) -> (bool, String, serde_json::Value, ExclusivityGraph, VertexWeights) {
    let b = catalog_get(catalog_name).unwrap();
    let norm = check_normalization(&b, 1e-9);
    let nd = check_nondisturbance(&b, 1e-9);
    let g = exclusivity_graph(b.scenario());
    let w = behaviour_to_weights(&b, &g).unwrap();
    let one = in_e_n(&g, &w, 1).unwrap();
    let two = in_e_n(&g, &w, 2).unwrap();
    let cert_ok = verify_ep_certificate(&g, &w, &one.certificate)
        && verify_ep_certificate(&g, &w, &two.certificate);
    let two_sum = match &two.certificate {
        Certificate::CliqueViolation { weight_sum, .. } => *weight_sum,
        Certificate::EpBound { weight_sum, .. } => *weight_sum,
        _ => f64::NAN,
    };
    let pass = norm.pass && nd.pass && !two.member && two_sum > 1.0 + 1e-9 && cert_ok;
    let details = format!(
        "(A) {} (B) {}; n=1 member: {}; n=2 member: {} (clique weight {:.6})",
        norm.pass, nd.pass, one.member, two.member, two_sum
    );
    let artifact = json!({
        "normalization": norm.pass,
        "nondisturbance": nd.pass,
        "one_copy": serde_json::to_value(&one).unwrap(),
        "two_copies": serde_json::to_value(&two).unwrap(),
    });
    (pass, details, artifact, g, w)
}

fn criterion_specker() -> (bool, String, serde_json::Value) {
    let (pass, details, artifact, _, _) = ep_criterion("specker_triangle");
    (pass, details, artifact)
}

fn criterion_wright() -> (bool, String, serde_json::Value) {
    let (pass, details, artifact, _, _) = ep_criterion("wright_pentagon");
    (pass, details, artifact)
}

fn criterion_pr_box() -> (bool, String, serde_json::Value) {
    let b = catalog_get("pr_box").unwrap();
    let g = exclusivity_graph(b.scenario());
    let w = behaviour_to_weights(&b, &g).unwrap();
    let single = max_weight_clique(&g, &w);
    let mut ok = (single.weight_sum - 1.0).abs() <= 1e-9;
    let two = in_e_n(&g, &w, 2).unwrap();
    ok &= !two.member && verify_ep_certificate(&g, &w, &two.certificate);
    let local = in_local_polytope(&b).unwrap();
    ok &= !local.member;
    let (bound, value) = match &local.certificate {
        Certificate::SeparatingInequality { bound, value, .. } => (*bound, *value),
        _ => (f64::NAN, f64::NAN),
    };
    ok &= (bound - 2.0).abs() <= 1e-9 && (value - 4.0).abs() <= 1e-9;
    let dets = deterministic_behaviours(&b).unwrap();
    ok &= verify_separating_inequality(&dets, &b.stacked(), &local.certificate);
    // Direct computation of the CHSH value as an independent cross-check.
    let s_chsh = chsh_value(&b);
    ok &= (s_chsh - 4.0).abs() <= 1e-9;
    let details = format!(
        "n=1 max clique {:.9}; n=2 member {}; local bound {:.9} vs PR value {:.9} (direct CHSH {:.9})",
        single.weight_sum, two.member, bound, value, s_chsh
    );
    let artifact = json!({
        "single_copy_max": single.weight_sum,
        "two_copies": serde_json::to_value(&two).unwrap(),
        "local": serde_json::to_value(&local).unwrap(),
        "chsh_value": s_chsh,
    });
    (ok, details, artifact)
}

fn criterion_theta_c5() -> (bool, String, serde_json::Value) {
    let g = ExclusivityGraph::cycle(5);
    let theta = max_linear_over_theta(&g, &[1.0; 5]).unwrap();
    let mut ok = (theta - 5.0f64.sqrt()).abs() <= 1e-4;

    let boundary = VertexWeights::uniform(5, 1.0 / 5.0f64.sqrt());
    let member_ok = match in_theta_body(&g, &boundary).unwrap() {
        ThetaVerdict::Member(cert) => verify_theta_certificate(&g, &boundary, &cert),
        _ => false,
    };
    ok &= member_ok;

    let outside = VertexWeights::uniform(5, 0.45);
    let outside_ok = match in_theta_body(&g, &outside).unwrap() {
        ThetaVerdict::NonMember { dual, .. } => verify_theta_nonmember(&g, &outside, &dual),
        _ => false,
    };
    ok &= outside_ok;

    let stab_point = VertexWeights::uniform(5, 0.4);
    let stab = in_stab(&g, &stab_point).unwrap();
    ok &= stab.member && verify_stab_mixture(&g, &stab_point, &stab.certificate);

    let details = format!(
        "theta(C5) = {theta:.7} (target {:.7}); 1/sqrt5 member {member_ok}; 0.45 non-member {outside_ok}; 2/5 in STAB {}",
        5.0f64.sqrt(),
        stab.member
    );
    let artifact = json!({
        "theta": theta,
        "boundary_member": member_ok,
        "outside_nonmember": outside_ok,
        "stab_member": stab.member,
    });
    (ok, details, artifact)
}

fn criterion_sandwich() -> (bool, String, serde_json::Value) {
    let g = ExclusivityGraph::cycle(5);
    let r = sandwich_report(&g, 2).unwrap();
    let inv_sqrt5 = 1.0 / 5.0f64.sqrt();
    let mut ok = r.chain_ok;
    ok &= (r.lower - 0.4).abs() <= 1e-12;
    ok &= (r.upper[0] - 0.5).abs() <= 1e-12;
    ok &= (r.upper[1] - inv_sqrt5).abs() <= 1e-9;
    ok &= (r.theta_uniform - inv_sqrt5).abs() <= 1e-4;
    ok &= r.clique_numbers == vec![2, 5];
    let details = format!(
        "l1 = {:.4} <= t = {:.7} <= u2 = {:.9} <= u1 = {:.4}; omega = {:?}",
        r.lower, r.theta_uniform, r.upper[1], r.upper[0], r.clique_numbers
    );
    let artifact = serde_json::to_value(&r).unwrap();
    (ok, details, artifact)
}

fn criterion_h_embedding() -> (bool, String, serde_json::Value) {
    let c7 = ExclusivityGraph::cycle(7);
    let h = h_embedding(&c7);
    let mut ok = h.len() == 28 && h.edge_count() == 189;
    let witness = is_self_complementary(&h).unwrap();
    let verified = witness
        .as_ref()
        .map(|m| verify_isomorphism(&h, &complement(&h), m))
        .unwrap_or(false);
    ok &= verified;

    // Property sweep: 50 seeded random graphs with n <= 8.
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let mut sweep_failures = 0usize;
    for _ in 0..50 {
        let n = rng.gen_range(1..=8usize);
        let mut g = ExclusivityGraph::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(i, j);
                }
            }
        }
        let hg = h_embedding(&g);
        let found = is_self_complementary(&hg).unwrap();
        let good = match found {
            Some(m) => verify_isomorphism(&hg, &complement(&hg), &m),
            None => false,
        };
        let block = h_embedding_witness(n);
        let block_good = verify_isomorphism(&hg, &complement(&hg), &block);
        if !good || !block_good {
            sweep_failures += 1;
        }
    }
    ok &= sweep_failures == 0;
    let details = format!(
        "H(C7): 28 vertices, {} edges, witness verified {verified}; sweep failures {sweep_failures}/50",
        h.edge_count()
    );
    let artifact = json!({
        "edges": h.edge_count(),
        "witness": witness,
        "sweep_failures": sweep_failures,
    });
    (ok, details, artifact)
}

fn criterion_tsirelson() -> (bool, String, serde_json::Value) {
    let s = chsh_scenario();
    let r = tsirelson_realization();
    let report = validate_realization(&r, &s).unwrap();
    let mut ok = report.pass && report.worst() <= 1e-8;
    let b = catalog_get("tsirelson_chsh").unwrap();
    let value = chsh_value(&b);
    ok &= (value - 2.0 * SQRT_2).abs() <= 1e-9;
    let g = exclusivity_graph(&s);
    let w = behaviour_to_weights(&b, &g).unwrap();
    let theta_ok = match in_theta_body(&g, &w).unwrap() {
        ThetaVerdict::Member(cert) => verify_theta_certificate(&g, &w, &cert),
        _ => false,
    };
    ok &= theta_ok;
    let ideal = check_ideal(&r, &s).unwrap();
    ok &= ideal.pass;
    let details = format!(
        "residual {:.2e}; CHSH {:.9}; TH member {}; ideal {} ({} coarse-grainings)",
        report.worst(),
        value,
        theta_ok,
        ideal.pass,
        ideal.coarse_grainings_checked
    );
    let artifact = json!({
        "validation": serde_json::to_value(&report).unwrap(),
        "chsh": value,
        "theta_member": theta_ok,
        "ideal": serde_json::to_value(&ideal).unwrap(),
    });
    (ok, details, artifact)
}

fn criterion_almost_quantum() -> (bool, String, serde_json::Value) {
    let b = catalog_get("almost_quantum_chsh").unwrap();
    let norm = check_normalization(&b, 1e-12);
    let nd = check_nondisturbance(&b, 1e-12);
    let mut ok = norm.pass && nd.pass;

    let g = exclusivity_graph(b.scenario());
    let w = behaviour_to_weights(&b, &g).unwrap();
    let theta_ok = matches!(in_theta_body(&g, &w).unwrap(), ThetaVerdict::Member(_));
    ok &= theta_ok;

    let level1 = npa_infeasibility(b.scenario(), &b, 1).unwrap();
    let level1_feasible = matches!(level1, NpaOutcome::Feasible { .. });
    ok &= level1_feasible;

    let verdict = constraint_c_verdict(&b, 6, 2, 0).unwrap();
    let (verdict_name, verdict_ok, best_distance) = match &verdict {
        ConstraintCVerdict::Quantum { distance, .. } => ("quantum", false, *distance),
        ConstraintCVerdict::NonQuantum { certificate, best_distance, .. } => (
            "non-quantum",
            verify_npa_certificate(b.scenario(), &b, certificate),
            *best_distance,
        ),
        ConstraintCVerdict::Undecided { best_distance, .. } => ("undecided", true, *best_distance),
    };
    ok &= verdict_ok;

    let details = format!(
        "(A) {} (B) {} at 1e-12; TH member {}; level-1 feasible {}; verdict {} (best see-saw distance {:.3e})",
        norm.pass, nd.pass, theta_ok, level1_feasible, verdict_name, best_distance
    );
    let artifact = json!({
        "normalization": norm.pass,
        "nondisturbance": nd.pass,
        "theta_member": theta_ok,
        "level1_feasible": level1_feasible,
        "verdict": verdict_name,
        "best_distance": best_distance,
    });
    (ok, details, artifact)
}

fn criterion_chain_suite() -> (bool, String, serde_json::Value) {
    let graphs: Vec<(&str, ExclusivityGraph)> = vec![
        ("c5", ExclusivityGraph::cycle(5)),
        ("c7", ExclusivityGraph::cycle(7)),
        ("chsh", exclusivity_graph(&chsh_scenario())),
        ("h(c5)", h_embedding(&ExclusivityGraph::cycle(5))),
    ];
    let per_graph = 50usize;
    let mut chain_failures = 0usize;
    let mut cert_failures = 0usize;
    let mut inconclusive = 0usize;
    let mut checked = 0usize;

    for (gi, (gname, g)) in graphs.iter().enumerate() {
        let n = g.len();
        let mut rng = ChaCha20Rng::seed_from_u64(1000 + gi as u64);
        for _k in 0..per_graph {
            // Direction scaled to straddle the QSTAB boundary, clamped to 1.
            let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02..1.0)).collect();
            let sigma =
                max_weight_clique(g, &VertexWeights::new(d.clone()).unwrap()).weight_sum;
            let r = rng.gen_range(0.3..1.3);
            let w: Vec<f64> = d.iter().map(|v| (v * r / sigma).min(1.0)).collect();
            let w = VertexWeights::new(w).unwrap();
            checked += 1;

            let stab = in_stab(g, &w).unwrap();
            let stab_cert_ok = if stab.member {
                verify_stab_mixture(g, &w, &stab.certificate)
            } else {
                let sets = enumerate_independent_sets(g).unwrap();
                let vertices: Vec<Vec<f64>> = sets
                    .iter()
                    .map(|s| VertexWeights::characteristic(n, s).as_slice().to_vec())
                    .collect();
                verify_separating_inequality(&vertices, w.as_slice(), &stab.certificate)
            };

            let theta = in_theta_body(g, &w).unwrap();
            let (theta_member, theta_cert_ok) = match &theta {
                ThetaVerdict::Member(cert) => (true, verify_theta_certificate(g, &w, cert)),
                ThetaVerdict::NonMember { dual, .. } => {
                    (false, verify_theta_nonmember(g, &w, dual))
                }
                ThetaVerdict::Inconclusive { .. } => {
                    inconclusive += 1;
                    (false, false)
                }
            };
            if matches!(theta, ThetaVerdict::Inconclusive { .. }) {
                continue;
            }

            let e2 = in_e_n(g, &w, 2).unwrap();
            let e1 = in_qstab(g, &w).unwrap();
            let e2_cert_ok = verify_ep_certificate(g, &w, &e2.certificate);
            let e1_cert_ok = verify_ep_certificate(g, &w, &e1.certificate);

            if !(stab_cert_ok && theta_cert_ok && e2_cert_ok && e1_cert_ok) {
                cert_failures += 1;
            }
            let chain_ok = (!stab.member || theta_member)
                && (!theta_member || e2.member)
                && (!e2.member || e1.member);
            if !chain_ok {
                chain_failures += 1;
                eprintln!(
                    "chain violated on {gname}: stab {} theta {} e2 {} e1 {}",
                    stab.member, theta_member, e2.member, e1.member
                );
            }
        }
    }
    let ok = chain_failures == 0 && cert_failures == 0 && inconclusive == 0;
    let details = format!(
        "{checked} weightings: chain failures {chain_failures}, certificate failures {cert_failures}, inconclusive {inconclusive}"
    );
    let artifact = json!({
        "checked": checked,
        "chain_failures": chain_failures,
        "cert_failures": cert_failures,
        "inconclusive": inconclusive,
    });
    (ok, details, artifact)
}

fn criterion_classicality() -> (bool, String, serde_json::Value) {
    let g = ExclusivityGraph::cycle(5);
    let sigma = is_self_complementary(&g).unwrap().expect("C5 is self-complementary");
    let sets = enumerate_independent_sets(&g).unwrap();
    let mut ok = true;
    let mut max_val: f64 = 0.0;
    for s in &sets {
        let mapped: Vec<usize> = s.iter().map(|&v| sigma[v]).collect();
        let q = VertexWeights::characteristic(5, &mapped);
        let v = antiblocker_max(PolytopeSet::QStab, &g, &q).unwrap();
        max_val = max_val.max(v);
        ok &= v <= 1.0 + EP_TOL;
    }
    // Informational: the identity embedding of a non-adjacent pair exceeds 1,
    // which is why the classical-set identification needs the relabeling.
    let literal_pair = antiblocker_max(
        PolytopeSet::QStab,
        &g,
        &VertexWeights::characteristic(5, &[0, 2]),
    )
    .unwrap();
    let details = format!(
        "{} independent sets via self-complement map: max value {:.9} (<= 1 + 1e-9); literal non-adjacent pair gives {:.4}",
        sets.len(),
        max_val,
        literal_pair
    );
    let artifact = json!({
        "sets": sets.len(),
        "max_value": max_val,
        "literal_pair_value": literal_pair,
        "witness": sigma,
    });
    (ok, details, artifact)
}
