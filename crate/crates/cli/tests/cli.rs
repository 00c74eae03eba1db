use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).to_string_lossy().into_owned()
}

/// Runs the binary with `--json`; returns the exit code and the parsed report.
fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_deligne-lab")).arg("--json").args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), report)
}

fn group(report: &Value, label: &str) -> Value {
    report["results"]
        .as_array()
        .expect("results")
        .iter()
        .find(|e| e["label"] == label)
        .unwrap_or_else(|| panic!("no {label} in {report}"))["group"]
        .clone()
}

fn descriptor(v: usize, t: usize, l: usize, f: &[u64]) -> Value {
    serde_json::json!({"vector_dim": v, "torus_rank": t, "lattice_rank": l, "finite_factors": f})
}

#[test]
fn odd_sphere_twist_both_paths() {
    let (code, r) = run(&["twisted", "sphere(3)", "--twist", "h3_scale2", "--via", "both"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(group(&r, "odd"), descriptor(0, 0, 0, &[2]));
    assert_eq!(group(&r, "ev"), descriptor(0, 0, 0, &[]));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(r["provenance"].as_array().unwrap().len(), 2);
}

#[test]
fn even_sphere_periodic_deligne() {
    let (code, r) = run(&["deligne", "sphere(2)", "--periodic", "ev"]);
    assert_eq!(code, 0);
    let g = group(&r, "ev");
    assert_eq!(g["lattice_rank"], 2);
    assert_eq!(g["torus_rank"], 0);
    assert!(g["vector_dim"].as_u64().unwrap() > 0);
}

#[test]
fn circle_degree_one() {
    let (code, r) = run(&["cohomology", "circle(6)", "--coeff", "z", "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(group(&r, "H^1"), descriptor(0, 0, 1, &[]));
}

#[test]
fn schema_is_shared_across_subcommands() {
    let runs = [
        run(&["cohomology", "sphere(2)", "--periodic", "ev"]),
        run(&["deligne", "sphere(1)", "--weight", "1"]),
        run(&["twisted", &corpus("hexagon.space"), "--twist", &corpus("hexagon_sign.twist")]),
        run(&["ahss", "sphere(3)", "--twist", "h3_scale3"]),
        run(&["cdga", "sphere(3)", "--twist-form", "2*x"]),
        run(&["check", "parity-shift"]),
    ];
    for (code, r) in runs {
        assert_eq!(code, 0, "{r}");
        let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["checks", "command", "details", "error", "provenance", "request", "results", "status", "timing_ms"]
                .iter()
                .collect::<Vec<_>>()
        );
        assert_eq!(r["status"], "ok");
    }
}

#[test]
fn descriptors_round_trip() {
    let (_, r) = run(&["twisted", "sphere(3)", "--twist", "dh3_scale3"]);
    for e in r["results"].as_array().unwrap() {
        let g: deligne_lab::abelian::DiffCohGroup = serde_json::from_value(e["group"].clone()).unwrap();
        assert_eq!(serde_json::to_value(&g).unwrap(), e["group"]);
    }
}

#[test]
fn sign_twist_on_hexagon_file() {
    let (code, r) = run(&["twisted", &corpus("hexagon.space"), "--twist", &corpus("hexagon_sign.twist")]);
    assert_eq!(code, 0);
    assert_eq!(group(&r, "ev"), descriptor(0, 0, 0, &[]));
    assert_eq!(group(&r, "odd"), descriptor(0, 0, 0, &[2]));
}

#[test]
fn obstructed_twist_exits_two_with_certificate() {
    let (space, twist) = (corpus("triangle.space"), corpus("triangle_obstructed.twist"));
    for via in ["direct", "both"] {
        let (code, r) = run(&["twisted", &space, "--twist", &twist, "--via", via]);
        assert_eq!(code, 2);
        assert_eq!(r["error"]["kind"], "precondition");
        assert_eq!(r["error"]["certificate"]["nonzero"][0]["simplex"], "[a,b,c]");
    }
    // without --via the query is routed to the spectral sequence
    let (code, r) = run(&["twisted", &space, "--twist", &twist]);
    assert_eq!(code, 0);
    assert_eq!(group(&r, "ev"), descriptor(0, 0, 1, &[]));
    assert!(r["provenance"][0].as_str().unwrap().contains("AHSS"));
}

#[test]
fn no_mismatch_on_the_corpus() {
    let cases =
        [("s3.space", "s3_h5.twist"), ("s3.space", "s3_dh2.twist"), ("triangle.space", "triangle_obstructed.twist")];
    for (s, t) in cases {
        let (code, r) = run(&["twisted", &corpus(s), "--twist", &corpus(t), "--via", "both"]);
        assert!(code == 0 || code == 2, "{s} {t}: {r}");
    }
    for (s, t) in [
        ("sphere(3)", "h3_scale7"),
        ("sphere(5)", "h5_scale3"),
        ("sphere(2)", "h3_scale4"),
        ("sphere(4)", "dh5_scale2"),
    ] {
        let (code, r) = run(&["twisted", s, "--twist", t, "--via", "both"]);
        assert_eq!(code, 0, "{s} {t}: {r}");
    }
}

#[test]
fn twist_files_match_builtins() {
    let (_, a) = run(&["twisted", &corpus("s3.space"), "--twist", &corpus("s3_h5.twist")]);
    assert_eq!(group(&a, "odd"), descriptor(0, 0, 0, &[5]));
    let (_, b) = run(&["twisted", &corpus("s3.space"), "--twist", &corpus("s3_dh2.twist")]);
    let (_, c) = run(&["twisted", "sphere(3)", "--twist", "dh3_scale2"]);
    assert_eq!(b["results"], c["results"]);
}

#[test]
fn parse_errors_exit_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.twist");
    std::fs::write(&bad, "kind: integral\ndegree: 3\ncochain: {[0, 1, 2, 9]: 1}\n").unwrap();
    let (code, r) = run(&["twisted", "sphere(3)", "--twist", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(r["error"]["message"].as_str().unwrap().contains("line 3"), "{r}");
    let (code, _) = run(&["cohomology", "spere(2)"]);
    assert_eq!(code, 1);
    let out = Command::new(env!("CARGO_BIN_EXE_deligne-lab")).args(["deligne", "sphere(2)"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "missing --weight/--periodic");
}

#[test]
fn wrong_twist_kind_is_a_precondition_failure() {
    let (code, r) = run(&["ahss", &corpus("hexagon.space"), "--twist", &corpus("hexagon_sign.twist")]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "error");
    let (code, _) = run(&["cdga", "sphere(2)", "--twist-form", "x"]);
    assert_eq!(code, 2);
}

#[test]
fn cdga_models() {
    let (code, r) = run(&["cdga", &corpus("sphere2.cdga")]);
    assert_eq!(code, 0);
    assert_eq!(group(&r, "ev"), descriptor(2, 0, 0, &[]));
    assert_eq!(group(&r, "odd"), descriptor(0, 0, 0, &[]));
    let (_, r) = run(&["cdga", &corpus("patch.cdga"), "--twist-form", "H"]);
    assert_eq!(group(&r, "ev"), descriptor(1, 0, 0, &[]));
    let (_, r) = run(&["cdga", &corpus("mixed.cdga")]);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn ahss_pages_and_diamond_flags() {
    let (code, r) = run(&["ahss", "sphere(3)", "--twist", "h3_scale2", "--pages"]);
    assert_eq!(code, 0);
    assert_eq!(r["details"][0]["last"]["r"], 4);
    assert_eq!(r["details"][0]["e2"]["r"], 2);
    let (code, r) = run(&["deligne", "sphere(2)", "--periodic", "ev", "--check-diamond"]);
    assert_eq!(code, 0);
    assert_eq!(r["details"]["r_onto_closed"], false);
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_deligne-lab"))
        .env("DELIGNE_LAB_THREADS", "zero")
        .args(["cohomology", "point"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_deligne-lab"))
        .env("DELIGNE_LAB_THREADS", "2")
        .args(["check", "cech"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
