use exwb_core::quantum::{seesaw_fit, SeesawOptions};
use exwb_core::scenario::catalog_get;

fn main() {
    let b = catalog_get("almost_quantum_chsh").unwrap();
    for d in [2usize, 4, 6] {
        let opts = SeesawOptions { seed: 0, restarts: 6, iterations: 200 };
        let fit = seesaw_fit(b.scenario(), &b, d, &opts).unwrap();
        println!(
            "d={d}: distance {:.6} (trace last {:.6})",
            fit.distance,
            fit.distance_trace.last().unwrap()
        );
    }
}
