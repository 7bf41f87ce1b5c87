use std::path::Path;
use std::process::{Command, Output};

use filiform_ricci::linalg::{parse_rational, q, Rational};
use serde_json::Value;

fn filiform(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_filiform"));
    cmd.args(args).env_remove("FILIFORM_OUT_DIR");
    if let Some(dir) = out_dir {
        cmd.env("FILIFORM_OUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn decide_q8_boundary_point() {
    let out = filiform(&["decide", "--family", "Qn", "--n", "8", "--a", "1", "--d", "-5/2"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["l"], 6);
    assert_eq!(v["answer"], "no");
    // ι₈ = 5a + 2d and ι₆ = 14a + 4d
    assert_eq!(v["iota"]["8"], "0");
    assert_eq!(v["iota"]["6"], "4");
}

#[test]
fn sweep_matches_region_at_n6() {
    let args = ["sweep", "--family", "Qn", "--n", "6", "--a", "-2..2/0.25", "--d", "-2..2/0.25"];
    let out = filiform(&args, None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,d,T,iota_4,iota_5,iota_6,l,answer,sign_flipped"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let a = parse_rational(f[0]).unwrap();
        let d = parse_rational(f[1]).unwrap();
        let (u, v): (Rational, Rational) = (q(2) * &a + &d, q(3) * &a + q(2) * &d);
        let zero = q(0);
        let expected = (u > zero && v > zero) || (u < zero && v < zero);
        assert_eq!(f[7] == "yes", expected, "{line}");
        if expected {
            assert_eq!(f[8] == "true", u < zero, "{line}");
        }
        rows += 1;
    }
    assert_eq!(rows, 17 * 17);

    let single = filiform(&[&args[..], &["--jobs", "1"]].concat(), None);
    assert_eq!(single.stdout, text.as_bytes(), "output depends on the pool width");
}

#[test]
fn necessity_test_reports_no_hits() {
    let out =
        filiform(&["necessity-test", "--n", "6", "--a", "1", "--d", "-8/5", "--samples", "200", "--seed", "7"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["negative_definite_hits"], 0);
    assert_eq!(v["trace_bound_satisfied"], 200);
    let again =
        filiform(&["necessity-test", "--n", "6", "--a", "1", "--d", "-8/5", "--samples", "200", "--seed", "7"], None);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn necessity_test_refuses_yes_points() {
    let out = filiform(&["necessity-test", "--n", "6", "--a", "1", "--d", "-1", "--seed", "1"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_then_certify() {
    let dir = tempfile::tempdir().unwrap();
    let out = filiform(&["construct", "--n", "8", "--a", "1", "--d", "-2", "--lower-seed", "5"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["certified"], true);
    let metric = dir.path().join("metric.json");
    assert!(metric.exists());
    let cert = filiform(&["certify", "--metric", metric.to_str().unwrap()], None);
    assert_eq!(cert.status.code(), Some(0));
    let v = json(&cert);
    assert_eq!(v["negative_definite"], true);
    assert!(v["max_eigenvalue"].as_f64().unwrap() < -v["tolerance"].as_f64().unwrap());
}

#[test]
fn construct_refuses_no_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = filiform(&["construct", "--n", "6", "--a", "1", "--d", "-8/5"], Some(dir.path()));
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("metric.json").exists());
}

#[test]
fn certify_rejects_a_flat_metric() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("abelian.json");
    let file = serde_json::json!({
        "family": null, "n": null, "a": null, "d": null, "sign_flipped": null, "case": null,
        "algebra": { "dim": 2, "labels": ["X1", "X2"], "brackets": [] },
        "gram": [[1.0, 0.0], [0.0, 1.0]],
    });
    std::fs::write(&path, file.to_string()).unwrap();
    let out = filiform(&["certify", "--metric", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(filiform(&["decide", "--n", "6", "--a", "1/0", "--d", "1"], None).status.code(), Some(4));
    assert_eq!(filiform(&["decide", "--n", "5", "--a", "1", "--d", "1"], None).status.code(), Some(6));
    assert_eq!(filiform(&["certify", "--metric", "/nonexistent/metric.json"], None).status.code(), Some(5));
    assert_eq!(filiform(&["frobnicate"], None).status.code(), Some(4));
    assert_eq!(filiform(&["--help"], None).status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/q6.json");
    let out = filiform(&["catalog", "--n", "6", "--out", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["torus"]["phi1"][5], "7");
}
