use std::path::Path;
use std::process::{Command, Output};

fn oddwigner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddwigner")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn group_reports_classes() {
    let out = oddwigner(&["group", "metacyclic:7,3,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("5 classes, sizes 1,3,3,7,7"), "{text}");
    assert!(text.contains("order: 21 (odd)"));

    let text = stdout(&oddwigner(&["group", "cyclic:9"]));
    assert!(text.contains("9 classes, all singletons"));
}

#[test]
fn even_order_group_warns() {
    let out = oddwigner(&["group", "cyclic:6"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("even order: Wigner construction unavailable"));
}

#[test]
fn group_spec_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("g.json");
    std::fs::write(&spec, r#"{"type": "cayley", "table": [[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
    let out = oddwigner(&["group", path(&spec)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("3 classes, all singletons"));
}

#[test]
fn malformed_spec_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("g.json");
    std::fs::write(&spec, r#"{"type": "cyclic"}"#).unwrap();
    assert_eq!(oddwigner(&["group", path(&spec)]).status.code(), Some(2));
    assert_eq!(oddwigner(&["group", "cyclic:x"]).status.code(), Some(2));
    assert_eq!(oddwigner(&["verify", "cyclic:5", "--tol", "1e-20"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let a = oddwigner(&["verify", "metacyclic:7,3,2", "--seed", "42"]);
    assert!(a.status.success(), "{}", stdout(&a));
    let b = oddwigner(&["verify", "metacyclic:7,3,2", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed: 42"));

    let c = oddwigner(&["verify", "cyclic:15", "--seed", "7"]);
    assert!(c.status.success(), "{}", stdout(&c));
}

#[test]
fn verify_names_orthogonality_for_corrupted_irreps() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("irreps.json");
    let out = oddwigner(&["irreps", "dump", "metacyclic:7,3,2", "--out", path(&file)]);
    assert!(out.status.success());
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    // Replace the third one-dimensional irrep by a copy of the second.
    let second = doc["irreps"][1]["matrices"].clone();
    doc["irreps"][2]["matrices"] = second;
    std::fs::write(&file, doc.to_string()).unwrap();

    let out = oddwigner(&["verify", "metacyclic:7,3,2", "--irreps", path(&file)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL orthogonality"), "{}", stdout(&out));
    assert!(stderr(&out).contains("orthogonality"));

    let out = oddwigner(&["irreps", "check", "metacyclic:7,3,2", path(&file)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn irreps_dump_then_check_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("irreps.json");
    assert!(oddwigner(&["irreps", "dump", "metacyclic:11,5,3", "--basis", "orbit", "--out", path(&file)]).status.success());
    let out = oddwigner(&["irreps", "check", "metacyclic:11,5,3", path(&file)]);
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn wigner_of_delta_on_z7_is_sparse() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    std::fs::write(&state, r#"{"sparse": [{"element": 0, "re": 1.0}]}"#).unwrap();
    let out = oddwigner(&["wigner", "cyclic:7", path(&state), "--sparse"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 7);
    assert!(entries.iter().all(|e| e["g"] == 0));
    assert_eq!(doc["header"]["group"]["type"], "cyclic");
    assert_eq!(doc["layout"], "sparse");
}

#[test]
fn wigner_of_superposition_sits_at_midpoint() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        &state,
        format!(r#"{{"sparse": [{{"element": "(3,1)", "re": {s}}}, {{"element": "(2,2)", "re": {s}}}]}}"#),
    )
    .unwrap();
    let out = oddwigner(&["wigner", "metacyclic:7,3,2", path(&state), "--sparse"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let hit = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["g"] == 0 && e["j"] == 4 && e["m"] == 0 && e["n"] == 1 && e["mp"] == 0 && e["np"] == 2)
        .expect("component present");
    let z = num_complex::Complex64::new(hit["re"].as_f64().unwrap(), hit["im"].as_f64().unwrap());
    let expected = num_complex::Complex64::from_polar(1.0 / 14.0, -2.0 * std::f64::consts::PI / 7.0);
    assert!((z - expected).norm() < 1e-12, "{z}");
}

#[test]
fn unnormalized_and_zero_states() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    std::fs::write(&state, r#"{"dense": [[1,0],[1,0],[0,0]]}"#).unwrap();
    let out = oddwigner(&["wigner", "cyclic:3", path(&state)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(oddwigner(&["wigner", "cyclic:3", path(&state), "--auto-normalize"]).status.success());

    std::fs::write(&state, r#"{"dense": [[0,0],[0,0],[0,0]]}"#).unwrap();
    let out = oddwigner(&["wigner", "cyclic:3", path(&state), "--auto-normalize"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot normalize zero state"));
}

#[test]
fn wigner_refuses_even_order() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    std::fs::write(&state, r#"{"sparse": [{"element": 0, "re": 1.0}]}"#).unwrap();
    let out = oddwigner(&["wigner", "cyclic:6", path(&state)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("even"));
}

#[test]
fn wigner_writes_marginals_and_tilde() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let (m, t, w) = (dir.path().join("m.json"), dir.path().join("t.json"), dir.path().join("w.json"));
    std::fs::write(&state, r#"{"dense": [[0.6,0],[0,0.8],[0,0]]}"#).unwrap();
    let out = oddwigner(&[
        "wigner", "cyclic:3", path(&state), "--marginals", path(&m), "--tilde", path(&t), "--out", path(&w),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let marg: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    let pos: Vec<f64> = marg["position"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!((pos[0] - 0.36).abs() < 1e-12 && (pos[1] - 0.64).abs() < 1e-12 && pos[2].abs() < 1e-12);
    let tilde: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(tilde["entries"].as_array().unwrap().len(), 9);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(doc["entries"].as_array().unwrap().len(), 9);
}

#[test]
fn fourier_prints_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    std::fs::write(&state, r#"{"sparse": [{"element": "(0,0)", "re": 1.0}]}"#).unwrap();
    let out = oddwigner(&["fourier", "metacyclic:7,3,2", path(&state)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    // 3 one-dimensional coefficients and two 3×3 blocks.
    let rows = text.lines().filter(|l| !l.contains(':') && !l.starts_with('#')).count();
    assert_eq!(rows, 21);
    assert!(text.contains("norm: 1.0000000000000000e0"));
}

#[test]
fn order21_example_reports_side_by_side() {
    let out = oddwigner(&["paper-example"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("W1 support: (3,1)"));
    assert!(text.contains("W2 support: (2,2)"));
    assert!(text.contains("W_int support: (0,0)"));
    assert!(text.contains("computed:") && text.contains("reference:"));
    assert!(text.contains("|z| 7.14285714285714"));

    let out = oddwigner(&["paper-example", "--c1", "1,0", "--c2", "0,0"]);
    assert!(stdout(&out).contains("W_int support: (none)"));

    let out = oddwigner(&["paper-example", "--c1", "1,0", "--c2", "1,0"]);
    assert_eq!(out.status.code(), Some(1));
}
