use exwb_core::quantum::{behaviour_from_realization, seesaw_fit, SeesawOptions};
use exwb_core::scenario::{catalog_get, chsh_value};

fn main() {
    let b = catalog_get("almost_quantum_chsh").unwrap();
    let t = b.stacked();
    let tsi = catalog_get("tsirelson_chsh").unwrap().stacked();
    let d_tsi: f64 =
        t.iter().zip(&tsi).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    println!("|AQ - tsirelson| = {d_tsi:.6}");

    let opts = SeesawOptions { seed: 0, restarts: 6, iterations: 200 };
    let fit = seesaw_fit(b.scenario(), &b, 4, &opts).unwrap();
    let got = behaviour_from_realization(&fit.realization, b.scenario()).unwrap();
    println!("seesaw distance {:.6}, CHSH of fit {:.4}", fit.distance, chsh_value(&got));
    println!("target : {:?}", t.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    println!("fitted : {:?}", got.stacked().iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    println!("trace tail: {:?}", &fit.distance_trace[fit.distance_trace.len().saturating_sub(5)..]);
}
