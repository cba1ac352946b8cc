use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn growthlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_growthlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("GROWTHLAB_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("square2.json", r#"{"dim": 2, "vertices": [[0,0],[2,0],[0,2],[2,2]]}"#),
        ("simplex.json", r#"{"dim": 2, "vertices": [[0,0],[1,0],[0,1]]}"#),
        ("bad.json", r#"{"dim": 2, "vertices": [[0,0],[2,0],[0,1]]}"#),
        ("cube.json", r#"{"dim": 3, "vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]]}"#),
        ("series.json", r#"{"degrees": {"1": [[1,0]], "2": [[1,0],[2,0],[1,1]]}}"#),
    ];
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn growth_report_for_square() {
    let d = fixtures();
    let out = growthlab(&["growth", "--polytope", "square2.json", "--vertex", "0,0", "--k", "1,2,4"], d.path());
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["volume_ma"], "8/1");
    assert_eq!(v["result"]["seshadri_lp"], "2/1");
    assert_eq!(v["result"]["levels"], serde_json::json!([1, 2, 4]));
    assert_eq!(v["seed"], 0);
}

#[test]
fn non_delzant_verdict_exits_zero() {
    let d = fixtures();
    let out = growthlab(&["check-delzant", "--polytope", "bad.json"], d.path());
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    assert_eq!(r["delzant"], false);
    let failing: Vec<&Value> = r["vertices"].as_array().unwrap().iter().filter(|v| v["delzant"] == false).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["vertex"], serde_json::json!(["0/1", "1/1"]));
    assert_eq!(failing[0]["determinant"], "2/1");
}

#[test]
fn embed_ball_violation_exits_two() {
    let d = fixtures();
    let out = growthlab(&["embed-ball", "--polytope", "simplex.json", "--fs-lambda", "2", "--R", "5"], d.path());
    assert_eq!(out.status.code(), Some(2));
    let e = &json(&out)["error"];
    assert_eq!(e["kind"], "GrowthViolation");
    assert!(e["vertex"].is_array());
}

#[test]
fn embed_ball_success_writes_profile() {
    let d = fixtures();
    let out = growthlab(
        &["embed-ball", "--polytope", "square2.json", "--fs-lambda", "3/2", "--R", "10", "--profile", "p.csv", "--samples", "200", "--pairs", "1000"],
        d.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c = &json(&out)["result"]["certificate"];
    assert_eq!(c["convexity_check"]["passed"], true);
    assert!(c["R_prime"].as_f64().unwrap() > 10.0);
    let csv = std::fs::read_to_string(d.path().join("p.csv")).unwrap();
    assert!(csv.starts_with("t,source_plus_c,target,glued\n"));
    assert_eq!(csv.lines().count(), 202);
}

#[test]
fn precondition_errors_are_machine_readable() {
    let d = fixtures();
    let out = growthlab(&["growth", "--polytope", "bad.json", "--vertex", "0,1"], d.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "NotDelzantVertex");
    let out = growthlab(&["growth", "--polytope", "missing.json"], d.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "InvalidInput");
}

#[test]
fn seed_is_recorded_and_env_overrides() {
    let d = fixtures();
    let args = ["volume", "--polytope", "simplex.json", "--k", "2", "--samples", "2000", "--seed", "5"];
    let a = growthlab(&args, d.path());
    let b = growthlab(&args, d.path());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 5);
    let c = Command::new(env!("CARGO_BIN_EXE_growthlab")).args(args).current_dir(d.path()).env("GROWTHLAB_SEED", "9").output().unwrap();
    assert_eq!(json(&c)["seed"], 9);
    assert_eq!(json(&c)["result"]["monte_carlo"]["seed"], 9);
}

#[test]
fn corpus_is_deterministic_and_isolates_errors() {
    let d = fixtures();
    let empty = tempfile::tempdir().unwrap();
    let out = growthlab(&["corpus", "--dir", empty.path().to_str().unwrap()], d.path());
    let rows = json(&out)["result"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 7);
    for r in &rows {
        assert_eq!(r["seshadri_agree"], true);
        assert_eq!(r["okounkov_volume_identity"], true);
        assert!(r["error"].is_null());
    }

    std::fs::write(d.path().join("garbage.json"), "{not json").unwrap();
    let a = growthlab(&["corpus", "--dir", "."], d.path());
    let b = growthlab(&["corpus", "--dir", "."], d.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let rows = json(&a)["result"]["rows"].as_array().unwrap().clone();
    let by_name = |n: &str| rows.iter().find(|r| r["name"] == n).unwrap().clone();
    assert_eq!(by_name("garbage")["error"]["kind"], "Parse");
    assert_eq!(by_name("square2")["volume_ma"], "8/1");
    assert_eq!(by_name("cube")["volume_ma"], "6/1");
    // The series file is not a polytope.
    assert!(by_name("series")["error"].is_object());
    // bad.json is normalized at its first vertex, the origin, which is smooth.
    assert!(by_name("bad")["error"].is_null());

    std::fs::write(d.path().join("bad.json"), r#"{"dim": 2, "vertices": [[0,0],[2,0],[0,1]], "vertex": [0,1]}"#).unwrap();
    let rows = json(&growthlab(&["corpus", "--dir", "."], d.path()))["result"]["rows"].as_array().unwrap().clone();
    let bad = rows.iter().find(|r| r["name"] == "bad").unwrap();
    assert_eq!(bad["error"]["kind"], "NotDelzantVertex");
    assert_eq!(rows.iter().filter(|r| r["error"].is_null()).count(), 10);
}

#[test]
fn corpus_csv() {
    let d = fixtures();
    let out = growthlab(&["corpus", "--format", "csv"], d.path());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("name,source,dim,vertex,volume_ma"));
    assert!(text.contains("square-2,builtin,2,0/1 0/1,8/1,2/1,2/1,true,true,true,2/1"));
}

#[test]
fn svg_only_for_planar() {
    let d = fixtures();
    let out = growthlab(&["growth", "--polytope", "square2.json", "--svg", "g.svg"], d.path());
    assert!(out.status.success());
    let svg = std::fs::read_to_string(d.path().join("g.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("<polygon").count() == 2);
    let out = growthlab(&["okounkov", "--polytope", "square2.json", "--svg", "o.svg"], d.path());
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(d.path().join("o.svg")).unwrap().matches("<polygon").count(), 4);
    let out = growthlab(&["growth", "--polytope", "cube.json", "--svg", "c.svg"], d.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn okounkov_from_series() {
    let d = fixtures();
    let out = growthlab(&["okounkov", "--series", "series.json", "--k-max", "2", "--vol-l", "1/4"], d.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let r = &json(&out)["result"];
    assert!(r["body"]["limit"].is_null());
    assert!(r["volume_check"]["exact"].is_null());
    assert!(r["multiplicativity_violation"].is_null());
}

#[test]
fn other_commands_run() {
    let d = fixtures();
    for args in [
        vec!["normalize", "--polytope", "square2.json", "--vertex", "2,2"],
        vec!["seshadri", "--polytope", "simplex.json"],
        vec!["decompose", "--polytope", "square2.json"],
        vec!["gromov", "--polytope", "square2.json"],
        vec!["chebyshev", "--polytope", "simplex.json", "--k", "2", "--at", "1/3,1/3", "--at", "1,1"],
    ] {
        let out = growthlab(&args, d.path());
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let dec = json(&growthlab(&["decompose", "--polytope", "square2.json"], d.path()));
    assert_eq!(dec["result"]["reassembles"], true);
    let ch = json(&growthlab(&["chebyshev", "--polytope", "simplex.json", "--at", "1,1"], d.path()));
    assert!(ch["result"]["values"][0]["value"]["value"].is_null() || ch["result"]["values"][0]["value"]["value"].is_string());
}
