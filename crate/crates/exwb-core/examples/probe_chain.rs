use exwb_core::exgraph::{exclusivity_graph, h_embedding, ExclusivityGraph, VertexWeights};
use exwb_core::polytope::{in_e_n, in_qstab, max_weight_clique};
use exwb_core::scenario::chsh_scenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::time::Instant;

fn main() {
    let graphs: Vec<(&str, ExclusivityGraph)> = vec![
        ("chsh", exclusivity_graph(&chsh_scenario())),
        ("h(c5)", h_embedding(&ExclusivityGraph::cycle(5))),
    ];
    for (gi, (name, g)) in graphs.iter().enumerate() {
        let n = g.len();
        let mut rng = ChaCha20Rng::seed_from_u64(1000 + gi as u64 + 2);
        let mut total = 0.0;
        for k in 0..12 {
            let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02..1.0)).collect();
            let sigma = max_weight_clique(g, &VertexWeights::new(d.clone()).unwrap()).weight_sum;
            let r = rng.gen_range(0.3..1.3);
            let w: Vec<f64> = d.iter().map(|v| (v * r / sigma).min(1.0)).collect();
            let w = VertexWeights::new(w).unwrap();
            let t = Instant::now();
            let e2 = in_e_n(g, &w, 2).unwrap();
            let dt = t.elapsed().as_secs_f64();
            total += dt;
            let e1 = in_qstab(g, &w).unwrap();
            println!("{name} #{k}: r={r:.3} e2={} e1={} in {dt:.2}s", e2.member, e1.member);
        }
        println!("== {name}: total {total:.1}s for 12 points");
    }
}
