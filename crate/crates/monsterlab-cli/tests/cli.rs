use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_monsterlab"));
    c.env_remove("MONSTERLAB_PRECISION");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn sample_volterra_h_grid() {
    let out = run(&["sample", "--fn", "volterra_h", "--interval", "-0.5:0.5", "--grid", "1001"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# precision: 17 fractional digits"));
    assert_eq!(lines.next(), Some("x,value,radius"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1001);
    assert_eq!(rows[500], "0.00000000000000000,0.00000000000000000,0.00000000000000000");
    assert!(!text.contains('\r'));
}

#[test]
fn sample_takagi_exact() {
    let out = run(&["sample", "--fn", "takagi", "--depth", "8", "--grid", "17", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 17);
    // 1/16: f_0 = 1/16, f_1 = 1/16, deeper lattice distances vanish
    assert_eq!(rows[1][0], "1/16");
    assert_eq!(rows[1][1], "5/16");
    assert_eq!(rows[1][2], "1/512");
}

#[test]
fn precision_from_environment() {
    let out = bin()
        .args(["sample", "--fn", "takagi", "--depth", "2", "--grid", "3"])
        .env("MONSTERLAB_PRECISION", "4")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "# precision: 4 fractional digits\nx,value,radius\n0.0000,0.0000,0.1250\n0.5000,0.5000,0.1250\n1.0000,0.0000,0.1250\n");
    let bad = bin().args(["sample", "--fn", "takagi"]).env("MONSTERLAB_PRECISION", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn unknown_ids_rejected() {
    for args in [
        vec!["sample", "--fn", "nope"],
        vec!["verify", "--suite", "nope"],
        vec!["extend", "--pipeline", "nope", "--fn", "x2"],
        vec!["extend", "--pipeline", "jarnik", "--fn", "nope"],
        vec!["restrict", "--pipeline", "lipschitz", "--fn", "nope"],
        vec!["sample", "--fn", "psi", "--grid", "1"],
        vec!["sample", "--fn", "psi", "--interval", "1:0"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_exit_status() {
    let ok = run(&["verify", "--suite", "takagi-anchor", "--depth", "6"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["suite"], "takagi-anchor");
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], v["cases"]);
    let ok = run(&["verify", "--suite", "ex111-one", "--depth", "10"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["failed"], 0);
}

#[test]
fn verify_failure_is_nonzero() {
    // With a tolerance far below the oscillation of the accepted family, the criterion
    // rejects every staircase and the suite must report failures.
    let out = run(&["verify", "--suite", "c1-staircase", "--tol", "1/1000000000000"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["failed"].as_u64().unwrap() > 0);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn lipschitz_on_monotone_sample() {
    let input = data("monotone_samples.json");
    let out = run(&["restrict", "--pipeline", "lipschitz", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let c = &json(&out)["certificate"];
    assert_eq!(c["P"]["hull"], serde_json::json!(["0/1", "1/1"]));
    assert_eq!(c["P"]["gaps"], serde_json::json!([]));
    assert_eq!(c["ok"], true);
}

#[test]
fn lipschitz_drops_steep_part() {
    let input = data("steep_samples.json");
    let out = run(&["restrict", "--pipeline", "lipschitz", "--input", input.to_str().unwrap(), "--param", "L=4"]);
    assert!(out.status.success());
    let c = &json(&out)["certificate"];
    assert_eq!(c["ok"], true);
    assert_eq!(c["pairwise_failed"], 0);
    assert!(!c["P"]["gaps"].as_array().unwrap().is_empty());
}

#[test]
fn jarnik_single_gap_has_quadratic_pieces() {
    let input = data("single_gap.json");
    let out = run(&["extend", "--pipeline", "jarnik", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    let pieces = v["extension"]["pieces"].as_array().unwrap();
    assert!(pieces.iter().any(|p| p["kind"] == "poly" && p["coeffs"].as_array().unwrap().len() == 3));
    assert_eq!(v["max_degree"], 2);
    assert_eq!(v["certificate"]["failed"], 0);
    assert_eq!(v["fdiff"]["ok"], true);
    assert_eq!(v["adjustors"].as_array().unwrap().len(), 2);
}

#[test]
fn whitney_check_flags_ex111() {
    let out = run(&["extend", "--pipeline", "whitney-check", "--fn", "ex111", "--depth", "6"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["divergent"], true);
    assert_eq!(v["report"]["passed"], false);
    let smooth = json(&run(&["extend", "--pipeline", "whitney-check", "--fn", "x3", "--depth", "5", "--tol", "1/10", "--param", "order=2"]));
    assert_eq!(smooth["report"]["divergent"], false);
    assert_eq!(smooth["report"]["passed"], true);
}

#[test]
fn schema_errors_have_paths() {
    let input = data("bad_jets.json");
    let out = run(&["extend", "--pipeline", "jarnik", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("$.jets[1].point"), "{err}");
    assert!(err.contains("$.jets[2].derivs"), "{err}");
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.json");
    std::fs::write(&p, r#"{"samples": [{"x": "0", "value": "1"}, {"x": "0", "value": true}]}"#).unwrap();
    let out = run(&["restrict", "--pipeline", "rising-sun", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("$.samples[1].value"), "{err}");
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("psi.csv");
    let a = run(&["sample", "--fn", "psi", "--grid", "33", "--out", p.to_str().unwrap()]);
    assert!(a.status.success() && a.stdout.is_empty());
    let b = run(&["sample", "--fn", "psi", "--grid", "33"]);
    assert_eq!(std::fs::read(&p).unwrap(), b.stdout);
}

#[test]
fn extension_pipelines_run() {
    for p in ["linear", "hat", "c1", "whitney"] {
        let out = run(&["extend", "--pipeline", p, "--fn", "x3", "--depth", "3", "--param", "order=2"]);
        assert!(out.status.success(), "{p}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["pipeline"], p);
    }
    let w = json(&run(&["extend", "--pipeline", "whitney", "--fn", "sin", "--depth", "3", "--param", "order=2"]));
    assert_eq!(w["jet_probe"]["ok"], true);
}

#[test]
fn list_names_everything() {
    let out = run(&["--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["volterra_h", "staircase", "embedding-b", "differentiable", "whitney-check"] {
        assert!(text.contains(name), "{name}");
    }
}
