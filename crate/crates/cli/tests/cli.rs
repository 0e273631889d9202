use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn deloc(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_deloc"));
    cmd.args(args);
    if let Some(out) = out {
        cmd.arg("--out").arg(out);
    }
    cmd.output().expect("binary runs")
}

fn report(args: &[&str]) -> (Output, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = deloc(args, Some(&path));
    let json = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (output, json)
}

#[test]
fn hp_group_from_file() {
    let (out, json) = report(&["hp-group", "--group", &data("s3.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json["schema_version"], 1);
    let r = &json["results"][0];
    assert_eq!(r["classes"].as_array().unwrap().len(), 3);
    assert_eq!((r["even"].as_u64(), r["odd"].as_u64(), r["hh0_oracle"].as_u64()), (Some(3), Some(0), Some(3)));
}

#[test]
fn deloc_of_reflection_circle() {
    let (out, json) = report(&["deloc", "--space", &data("circle_reflection.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json["results"][0];
    assert_eq!((r["even"].as_u64(), r["odd"].as_u64()), (Some(3), Some(0)));
}

#[test]
fn builtin_assembly_corpus() {
    let (out, json) = report(&["assembly-check", "--corpus", "builtin"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json["results"]["passed"], 12);
    assert!(String::from_utf8_lossy(&out.stdout).contains("12/12"));
}

#[test]
fn assembly_from_files() {
    let (out, json) = report(&[
        "assembly-check",
        "--space",
        &data("circle_reflection.json"),
        "--bundle",
        &data("circle_reflection_sign.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json["results"]["total"], 2);
}

#[test]
fn umkehr_from_chain_file() {
    let (out, json) = report(&["umkehr", "--chain", &data("circle_collapse.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json["results"][0]["holds"], true);
}

#[test]
fn builtin_references_and_degree() {
    let (out, json) = report(&["cohomology", "--space", "builtin:torus", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json["results"][0]["degrees"][0]["nerve"], 2);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"vertices\": 2, \"simplices\": [[0, 5]]}").unwrap();
    let cases: [Vec<String>; 6] = [
        vec!["deloc".into(), "--space".into(), bad.display().to_string()],
        vec!["deloc".into(), "--space".into(), dir.path().join("missing.json").display().to_string()],
        vec!["hp-group".into(), "--group".into(), "builtin:nope".into()],
        vec!["deloc".into(), "--corpus".into(), "other".into()],
        vec!["cohomology".into(), "--space".into(), "builtin:circle".into(), "--degree".into(), "7".into()],
        vec!["assembly-check".into(), "--space".into(), "builtin:circle".into()],
    ];
    for args in &cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = deloc(&args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn invalid_bundle_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    std::fs::write(&bundle, r#"{"fiber_dim": 1, "rho": {"0": {"*": [["1/2"]]}}}"#).unwrap();
    let out = deloc(
        &["assembly-check", "--space", &data("circle_reflection.json"), "--bundle", bundle.to_str().unwrap()],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_override_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_deloc"))
        .args(["hp-group", "--group", "builtin:q8"])
        .env("DELOC_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn dnc_seed_changes_samples_but_not_verdict() {
    let (a, ja) = report(&["dnc-check", "--seed", "1", "--samples", "200"]);
    let (b, jb) = report(&["dnc-check", "--seed", "2", "--samples", "200"]);
    assert_eq!((a.status.code(), b.status.code()), (Some(0), Some(0)));
    assert_eq!(ja["passed"], true);
    assert_ne!(ja["results"]["pairs"], jb["results"]["pairs"]);
}
