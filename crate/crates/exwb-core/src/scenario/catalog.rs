//! Built-in scenarios and the behaviour catalog.
//!
//! Irrational entries are materialized to the nearest double; the exact
//! expression is kept in the doc comments next to each matrix.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use super::{Behaviour, Context, Scenario, ScenarioError};

/// The four-measurement scenario with a square compatibility graph:
/// x0 — y0 — x1 — y1 — x0 (each x compatible with each y).
pub fn chsh_scenario() -> Scenario {
    Scenario::new(
        vec![
            ("x0".into(), 2),
            ("x1".into(), 2),
            ("y0".into(), 2),
            ("y1".into(), 2),
        ],
        vec![
            ("x0".into(), "y0".into()),
            ("x0".into(), "y1".into()),
            ("x1".into(), "y0".into()),
            ("x1".into(), "y1".into()),
        ],
    )
    .expect("valid scenario")
}

/// n two-outcome measurements "1".."n" with cyclic compatibility
/// (i compatible with i+1 mod n). n = 3 is the triangle, n = 5 the pentagon.
///
/// For n = 3 the cycle is also a clique, but the measured contexts are the
/// three pairs (no joint measurement of all three exists in the scenario),
/// so they are declared explicitly.
pub fn cycle_scenario(n: usize) -> Scenario {
    assert!(n >= 3, "cycle needs at least 3 measurements");
    let measurements: Vec<(String, usize)> = (1..=n).map(|i| (i.to_string(), 2)).collect();
    let compatible: Vec<(String, String)> =
        (1..=n).map(|i| (i.to_string(), (i % n + 1).to_string())).collect();
    if n == 3 {
        Scenario::with_contexts(
            measurements,
            compatible,
            vec![vec!["1", "2"], vec!["2", "3"], vec!["1", "3"]],
        )
        .expect("valid scenario")
    } else {
        Scenario::new(measurements, compatible).expect("valid scenario")
    }
}

pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "specker_triangle",
        "wright_pentagon",
        "pr_box",
        "almost_quantum_chsh",
        "tsirelson_chsh",
        "deterministic_chsh",
    ]
}

/// Fetch a named behaviour.
///
/// The first four are stored matrices; `tsirelson_chsh` is generated from
/// the standard dimension-4 realization that attains CHSH value 2√2, and
/// `deterministic_chsh` assigns P(00|xy) = 1 everywhere.
pub fn catalog_get(name: &str) -> Result<Behaviour, ScenarioError> {
    match name {
        "specker_triangle" => half_half_cycle(3),
        "wright_pentagon" => half_half_cycle(5),
        "pr_box" => pr_box(),
        "almost_quantum_chsh" => almost_quantum_chsh(),
        "tsirelson_chsh" => Ok(crate::quantum::tsirelson_behaviour()),
        "deterministic_chsh" => deterministic_chsh(),
        _ => Err(ScenarioError::UnknownCatalogName {
            name: name.to_string(),
            available: catalog_names(),
        }),
    }
}

/// Rows (0, 1/2, 1/2, 0) on every edge context of a cycle. These rows are
/// symmetric under swapping the two measurements, so the canonical
/// (sorted-id) member order stores exactly the published matrices.
fn half_half_cycle(n: usize) -> Result<Behaviour, ScenarioError> {
    let s = cycle_scenario(n);
    let mut tables = BTreeMap::new();
    for ctx in s.maximal_contexts() {
        tables.insert(ctx, vec![0.0, 0.5, 0.5, 0.0]);
    }
    Behaviour::new(s, tables)
}

/// Rows 1-3: (1/2, 0, 0, 1/2); row 4 (context {x1,y1}): (0, 1/2, 1/2, 0).
fn pr_box() -> Result<Behaviour, ScenarioError> {
    let s = chsh_scenario();
    let correlated = vec![0.5, 0.0, 0.0, 0.5];
    let anticorrelated = vec![0.0, 0.5, 0.5, 0.0];
    let mut tables = BTreeMap::new();
    for ctx in s.maximal_contexts() {
        let ids = ctx.ids(&s);
        let t = if ids == ["x1", "y1"] { anticorrelated.clone() } else { correlated.clone() };
        tables.insert(ctx, t);
    }
    Behaviour::new(s, tables)
}

/// The non-quantum almost-quantum CHSH behaviour. Exact entries:
/// row (x0,y0): 2993/5500, 8/1375, 137/500, 22/125
/// row (x0,y1): 107/700, 139/350, 139/350, 37/700
/// row (x1,y0): 7/11+√2/9, 2/11−√2/9, 2/11−√2/9, √2/9
/// row (x1,y1): 2993/5500, 137/500, 8/1375, 22/125
fn almost_quantum_chsh() -> Result<Behaviour, ScenarioError> {
    let s = chsh_scenario();
    let rows: Vec<(Vec<&str>, Vec<f64>)> = vec![
        (
            vec!["x0", "y0"],
            vec![2993.0 / 5500.0, 8.0 / 1375.0, 137.0 / 500.0, 22.0 / 125.0],
        ),
        (
            vec!["x0", "y1"],
            vec![107.0 / 700.0, 139.0 / 350.0, 139.0 / 350.0, 37.0 / 700.0],
        ),
        (
            vec!["x1", "y0"],
            vec![
                7.0 / 11.0 + SQRT_2 / 9.0,
                2.0 / 11.0 - SQRT_2 / 9.0,
                2.0 / 11.0 - SQRT_2 / 9.0,
                SQRT_2 / 9.0,
            ],
        ),
        (
            vec!["x1", "y1"],
            vec![2993.0 / 5500.0, 137.0 / 500.0, 8.0 / 1375.0, 22.0 / 125.0],
        ),
    ];
    Behaviour::from_rows(s, rows)
}

/// P(00|xy) = 1 for every context.
fn deterministic_chsh() -> Result<Behaviour, ScenarioError> {
    let s = chsh_scenario();
    let mut tables = BTreeMap::new();
    for ctx in s.maximal_contexts() {
        tables.insert(ctx, vec![1.0, 0.0, 0.0, 0.0]);
    }
    Behaviour::new(s, tables)
}

/// CHSH expression S = E(x0y0) + E(x0y1) + E(x1y0) − E(x1y1) of a behaviour
/// on the CHSH scenario, with E = P(00) − P(01) − P(10) + P(11).
pub fn chsh_value(b: &Behaviour) -> f64 {
    let s = b.scenario();
    let correlator = |xs: &str, ys: &str| -> f64 {
        let ctx = Context::from_ids(s, &[xs, ys]).expect("CHSH context");
        let t = b.table(&ctx).expect("maximal context");
        t[0] - t[1] - t[2] + t[3]
    };
    correlator("x0", "y0") + correlator("x0", "y1") + correlator("x1", "y0")
        - correlator("x1", "y1")
}
