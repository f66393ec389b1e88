//! End-to-end checks of the command-line surface: subcommands, exit
//! codes, file outputs, and the seed environment override.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cantor-lab"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn word_lookup() {
    let (code, stdout, _) = run(&["words", "--index", "7"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "000");
}

#[test]
fn graph_check_passes() {
    let (code, stdout, _) = run(&["graph", "check", "--theta", "zeros", "--max-level", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);
}

#[test]
fn relation_decisions() {
    let (code, stdout, _) = run(&["cyl", "decide", "--rel", "c1", "--x", "01|0", "--y", "011|0"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("true"));
    let (code, stdout, _) = run(&[
        "cyl", "decide", "--rel", "as", "--s", r#"{"kind":"modular","m":2,"F":[]}"#,
        "--x", "01|0", "--y", "011|0",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("false"));
    let (code, stdout, _) = run(&["cyl", "decide", "--rel", "pf", "--x", "101|0"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("true"));
}

#[test]
fn self_pair_refutes_with_exit_one() {
    let evens = r#"{"kind":"modular","m":2,"F":[]}"#;
    let (code, stdout, _) = run(&["cond", "perp", "--s", evens, "--s2", evens, "--p", "3"]);
    assert_eq!(code, 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["refuting_c"], serde_json::json!(0));
}

#[test]
fn malformed_spec_is_a_usage_error() {
    let (code, _, stderr) = run(&["cond", "m", "--s", "{not json"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("bad index-set JSON"));
    let (code, _, _) = run(&["cyl", "decide", "--rel", "nonsense", "--x", "|0", "--y", "|1"]);
    assert_eq!(code, 3);
}

#[test]
fn orthogonality_certificate_file() {
    let dir = std::env::temp_dir().join("cantor-lab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    let (code, _, _) = run(&[
        "cond", "perpperp", "--alpha", "|0", "--alpha2", "1|0",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], serde_json::json!("cantor-lab/cert/v1"));
    assert_eq!(doc["condition"], serde_json::json!("orthogonality"));
    assert_eq!(doc["n0"], serde_json::json!(1));
    assert_eq!(doc["n1"], serde_json::json!(3));
    assert_eq!(doc["p_prefix"], serde_json::json!(31));
}

#[test]
fn synthesis_writes_a_verified_table() {
    let dir = std::env::temp_dir().join("cantor-lab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.json");
    let (code, _, _) = run(&[
        "synth", "--family", "as", "--b", "1", "--depth", "3",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["phi"], serde_json::json!([1, 2, 3]));
    assert_eq!(doc["verification"]["violations"], serde_json::json!(0));

    // the written table verifies on its own
    let (code, stdout, _) = run(&["synth", "--verify-table", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"violations\": []"));
}

#[test]
fn exhausted_synthesis_exits_inconclusive() {
    let (code, stdout, _) = run(&["synth", "--family", "a1", "--b", "010101010101", "--depth", "2"]);
    assert_eq!(code, 2);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["partial"]["completed_depth"], serde_json::json!(0));
}

#[test]
fn partial_bounds_json_uses_defaults() {
    let evens = r#"{"kind":"modular","m":2,"F":[]}"#;
    let (code, stdout, _) = run(&["cond", "m", "--s", evens, "--bounds", r#"{"p_max":3}"#]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["bounds"]["p_max"], serde_json::json!(3));
    assert_eq!(doc["bounds"]["q_max"], serde_json::json!(64));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn structure_transform_output() {
    let (code, stdout, _) = run(&[
        "struct", "transform", "--kind", "sp", "--rel", r#"{"n":2,"pairs":[[0,1]]}"#,
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["relation"]["pairs"], serde_json::json!([[0, 3], [3, 0]]));
}

#[test]
fn kst_check_passes() {
    let (code, _, _) = run(&["kst", "check", "--family", "pow2", "--horizon", "1024", "--max-level", "4"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["kst", "check", "--family", "unknown"]);
    assert_eq!(code, 3);
}

#[test]
fn suite_reports_are_reproducible_files() {
    let dir = std::env::temp_dir().join("cantor-lab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("report-a.json");
    let b = dir.join("report-b.json");
    for path in [&a, &b] {
        let (code, _, _) = run(&[
            "suite", "--groups", "words,struct,kst", "--seed", "5",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(doc["schema"], serde_json::json!("cantor-lab/report/v1"));
    assert_eq!(doc["seed"], serde_json::json!(5));
}

#[test]
fn environment_seed_overrides_config() {
    let out = bin()
        .args(["suite", "--groups", "words", "--seed", "5"])
        .env("CANTOR_LAB_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["seed"], serde_json::json!(123));
}

#[test]
fn suite_config_file_with_negative_control() {
    let dir = std::env::temp_dir().join("cantor-lab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(
        &path,
        r#"{
            "groups": ["cond"],
            "seed": 1,
            "perp_pairs": [
                [{"kind":"modular","m":3,"F":[]}, {"kind":"modular","m":3,"F":[]}]
            ]
        }"#,
    )
    .unwrap();
    let (code, stdout, _) = run(&["suite", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(doc["summary"]["refuted"].as_u64().unwrap() >= 1);
}
