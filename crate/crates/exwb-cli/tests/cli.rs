//! End-to-end CLI checks: exit codes, certificates on disk, manifest
//! replayability, JSON error reporting.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn exwb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exwb"))
}

fn run(args: &[&str]) -> Output {
    exwb().args(args).output().expect("binary runs")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("exwb-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_c7(dir: &Path) -> PathBuf {
    let path = dir.join("c7.json");
    let edges: Vec<(usize, usize)> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
    let json = serde_json::json!({ "n": 7, "edges": edges });
    std::fs::write(&path, serde_json::to_string(&json).unwrap()).unwrap();
    path
}

#[test]
fn catalog_then_membership_negative_verdict() {
    let dir = tmpdir("membership");
    let behaviour = dir.join("pr.json");
    let scenario = dir.join("chsh_scenario.json");
    let st = run(&[
        "scenario",
        "catalog",
        "--name",
        "pr_box",
        "--out",
        behaviour.to_str().unwrap(),
        "--scenario-out",
        scenario.to_str().unwrap(),
    ]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));

    let graph = dir.join("chsh.json");
    let st = run(&[
        "exgraph",
        "build",
        "--scenario",
        scenario.to_str().unwrap(),
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert!(st.status.success());

    // Two-copy EP violation: computed negative verdict, certificate written.
    let cert = dir.join("cert.json");
    let st = run(&[
        "membership",
        "--set",
        "en",
        "--graph",
        graph.to_str().unwrap(),
        "--behaviour",
        behaviour.to_str().unwrap(),
        "--copies",
        "2",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(2), "{}", String::from_utf8_lossy(&st.stderr));
    let payload: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(payload["member"], serde_json::Value::Bool(false));
    assert_eq!(payload["certificate"]["type"], "clique-violation");
    assert!(cert.with_extension("json.manifest.json").exists());

    // Single copy holds: exit 0.
    let st = run(&[
        "membership",
        "--set",
        "qstab",
        "--graph",
        graph.to_str().unwrap(),
        "--behaviour",
        behaviour.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(0));
}

#[test]
fn h_embed_emits_graph_and_witness() {
    let dir = tmpdir("hembed");
    let c7 = write_c7(&dir);
    let out = dir.join("h.json");
    let st = run(&["exgraph", "h-embed", "--graph", c7.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(st.status.success());
    let payload: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(payload["graph"]["n"], 28);
    assert_eq!(payload["graph"]["edges"].as_array().unwrap().len(), 189);
    assert_eq!(payload["self_complementarity_witness"].as_array().unwrap().len(), 28);
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tmpdir("replay");
    let out = dir.join("tsirelson.json");
    let st = run(&["scenario", "catalog", "--name", "tsirelson_chsh", "--out", out.to_str().unwrap()]);
    assert!(st.status.success());
    let first = std::fs::read(&out).unwrap();

    let manifest_path = out.with_extension("json.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    let argv: Vec<String> = manifest["command"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    // Replay the recorded command (argv[0] is the binary itself).
    let st = Command::new(env!("CARGO_BIN_EXE_exwb"))
        .args(&argv[1..])
        .output()
        .unwrap();
    assert!(st.status.success());
    let second = std::fs::read(&out).unwrap();
    assert_eq!(first, second, "replayed output differs");
}

#[test]
fn malformed_json_reports_position_and_exit_1() {
    let dir = tmpdir("badjson");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"n\": 3, \"edges\": [[0, 1]").unwrap();
    let st = run(&["exgraph", "complement", "--graph", bad.to_str().unwrap()]);
    assert_eq!(st.status.code(), Some(1));
    let err = String::from_utf8_lossy(&st.stderr);
    assert!(err.contains("line") && err.contains("column"), "stderr: {err}");
}

#[test]
fn theta_membership_exit_codes() {
    let dir = tmpdir("theta");
    let c5 = dir.join("c5.json");
    let edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    std::fs::write(&c5, serde_json::json!({ "n": 5, "edges": edges }).to_string()).unwrap();

    let inside = dir.join("inside.json");
    std::fs::write(&inside, serde_json::json!({ "weights": vec![0.4; 5] }).to_string()).unwrap();
    let st = run(&["theta", "member", "--graph", c5.to_str().unwrap(), "--weights", inside.to_str().unwrap()]);
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));

    let outside = dir.join("outside.json");
    std::fs::write(&outside, serde_json::json!({ "weights": vec![0.49; 5] }).to_string()).unwrap();
    let st = run(&["theta", "member", "--graph", c5.to_str().unwrap(), "--weights", outside.to_str().unwrap()]);
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn unknown_catalog_name_is_usage_error() {
    let st = run(&["scenario", "catalog", "--name", "nope"]);
    assert_eq!(st.status.code(), Some(1));
    let err = String::from_utf8_lossy(&st.stderr);
    assert!(err.contains("pr_box"), "should list the catalog: {err}");
}

#[test]
fn scenario_check_flags_signalling() {
    let dir = tmpdir("check");
    let b = dir.join("sig.json");
    // CHSH-shaped behaviour with a signalling x0 marginal.
    let json = serde_json::json!({
        "scenario": {
            "measurements": [
                {"id": "x0", "outcomes": 2}, {"id": "x1", "outcomes": 2},
                {"id": "y0", "outcomes": 2}, {"id": "y1", "outcomes": 2}
            ],
            "compatible": [["x0","y0"],["x0","y1"],["x1","y0"],["x1","y1"]]
        },
        "tables": {
            "x0,y0": [1.0, 0.0, 0.0, 0.0],
            "x0,y1": [0.0, 0.0, 0.5, 0.5],
            "x1,y0": [0.25, 0.25, 0.25, 0.25],
            "x1,y1": [0.25, 0.25, 0.25, 0.25]
        }
    });
    std::fs::write(&b, json.to_string()).unwrap();
    let st = run(&["scenario", "check", "--behaviour", b.to_str().unwrap()]);
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn dot_output_is_text() {
    let dir = tmpdir("dot");
    let c7 = write_c7(&dir);
    let st = run(&["exgraph", "dot", "--graph", c7.to_str().unwrap()]);
    assert!(st.status.success());
    let text = String::from_utf8_lossy(&st.stdout);
    assert!(text.starts_with("graph exclusivity {"));
    assert_eq!(text.matches(" -- ").count(), 7);
}

#[test]
fn paper_suite_subset_runs() {
    let dir = tmpdir("suite");
    let st = run(&[
        "paper-suite",
        "--criteria",
        "1,5",
        "--artifacts",
        dir.join("artifacts").to_str().unwrap(),
    ]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let text = String::from_utf8_lossy(&st.stdout);
    assert!(text.contains("[PASS] criterion  1"));
    assert!(text.contains("[PASS] criterion  5"));
    assert!(dir.join("artifacts/criterion_01.json").exists());
    assert!(dir.join("artifacts/criterion_05.json").exists());
}
