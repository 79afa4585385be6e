use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_regquat"));
    c.env_remove("REGQUAT_SEED").env_remove("REGQUAT_EPS_EQ");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn fixtures() -> (TempDir, PathBuf, PathBuf, PathBuf, PathBuf) {
    let dir = TempDir::new().unwrap();
    let qq = write(
        &dir,
        "qq.json",
        r#"{"format_version":1,"coeffs":[[1,0,0,0],[0,0,0,0],[1,0,0,0]],"flavor":"polynomial"}"#,
    );
    let qi = write(
        &dir,
        "qi.json",
        r#"{"format_version":1,"coeffs":[[0,-1,0,0],[1,0,0,0]],"flavor":"polynomial"}"#,
    );
    let qj = write(
        &dir,
        "qj.json",
        r#"{"format_version":1,"coeffs":[[0,0,-1,0],[1,0,0,0]],"flavor":"polynomial"}"#,
    );
    let c = write(
        &dir,
        "const.json",
        r#"{"format_version":1,"coeffs":[[0.5,-1.25,2,0.1]],"flavor":"polynomial"}"#,
    );
    (dir, qq, qi, qj, c)
}

fn quaternion(v: &Value) -> [f64; 4] {
    let a = v.as_array().expect("quaternion array");
    [0, 1, 2, 3].map(|k| a[k].as_f64().unwrap())
}

#[test]
fn zeros_of_q_squared_plus_one() {
    let (_d, qq, ..) = fixtures();
    let out = run(&["zeros", s(&qq), "--radius", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["points"].as_array().unwrap().len(), 0);
    let spheres = v["spheres"].as_array().unwrap();
    assert_eq!(spheres.len(), 1);
    assert_eq!(
        (spheres[0]["x"].as_f64(), spheres[0]["y"].as_f64()),
        (Some(0.0), Some(1.0))
    );
}

#[test]
fn eval_of_a_constant_is_the_constant() {
    let (_d, _, _, _, c) = fixtures();
    for at in ["0,0,0,0", "1,-2,3,0.5", "-7,1,1,1"] {
        let out = run(&["eval", s(&c), "--at", at]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(quaternion(&json(&out)["value"]), [0.5, -1.25, 2.0, 0.1]);
    }
}

#[test]
fn identity_reports_are_byte_identical_for_one_seed() {
    let (_d, _, qi, qj, _) = fixtures();
    let args = [
        "check",
        "identities",
        s(&qi),
        "--with",
        s(&qj),
        "--seed",
        "42",
        "--samples",
        "1000",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["all_passed"], true);
    let other = run(&[
        "check",
        "identities",
        s(&qi),
        "--with",
        s(&qj),
        "--seed",
        "43",
        "--samples",
        "1000",
    ]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn algebra_outputs_reparse_to_exact_coefficients() {
    let (d, qq, qi, qj, _) = fixtures();
    let prod = d.path().join("prod.json");
    let out = run(&["product", s(&qi), s(&qj), "-o", s(&prod)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&prod).unwrap()).unwrap();
    assert_eq!(v["format_version"], 1);
    let coeffs: Vec<[f64; 4]> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(quaternion)
        .collect();
    assert_eq!(
        coeffs,
        vec![
            [0.0, 0.0, 0.0, 1.0],
            [0.0, -1.0, -1.0, 0.0],
            [1.0, 0.0, 0.0, 0.0]
        ]
    );

    // the written file is itself a valid input
    let out = run(&["eval", s(&prod), "--at", "0,0,0,0"]);
    assert_eq!(quaternion(&json(&out)["value"]), [0.0, 0.0, 0.0, 1.0]);

    let out = run(&["symmetrize", s(&qi)]);
    let coeffs: Vec<[f64; 4]> = json(&out)["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(quaternion)
        .collect();
    assert_eq!(
        coeffs,
        vec![[1.0, 0.0, 0.0, 0.0], [0.0; 4], [1.0, 0.0, 0.0, 0.0]]
    );

    let out = run(&["conjugate", s(&qi)]);
    assert_eq!(quaternion(&json(&out)["coeffs"][0]), [0.0, 1.0, 0.0, 0.0]);

    // awkward decimals survive the trip unchanged
    let odd = write(
        &d,
        "odd.json",
        r#"{"coeffs":[[0.1,0.2,0.30000000000000004,1e-300],[1.7976931348623157e308,0,0,0]],"flavor":"polynomial"}"#,
    );
    let out = run(&["conjugate", s(&odd)]);
    let back = json(&out);
    assert_eq!(
        quaternion(&back["coeffs"][0]),
        [0.1, -0.2, -0.30000000000000004, -1e-300]
    );
    assert_eq!(
        quaternion(&back["coeffs"][1]),
        [1.7976931348623157e308, 0.0, 0.0, 0.0]
    );

    let out = run(&["reciprocal", s(&qq), "--order", "4"]);
    let v = json(&out);
    assert_eq!(v["flavor"], "truncated");
    assert_eq!(v["order"], 4);
    let coeffs: Vec<[f64; 4]> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(quaternion)
        .collect();
    assert_eq!(
        coeffs[..5],
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0; 4],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0; 4],
            [1.0, 0.0, 0.0, 0.0]
        ]
    );
}

#[test]
fn split_and_scan_outputs() {
    let (d, qq, ..) = fixtures();
    let v = json(&run(&["split", s(&qq), "--sphere", "0,1"]));
    assert_eq!(v["degenerate"], true);
    assert_eq!(v["zero"]["kind"], "whole-sphere");
    let v = json(&run(&["split", s(&qq), "--sphere", "0.5,0"]));
    assert_eq!(v["degenerate"], Value::Null);

    let csv = d.path().join("scan.csv");
    let out = run(&[
        "scan-degenerate",
        s(&qq),
        "--grid",
        "-2,2,0,2,41,21",
        "--csv",
        s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["sphere"]["x"].as_f64().unwrap().abs() < 1e-9));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,abs_c"));
    assert_eq!(text.lines().count(), 1 + 41 * 21);

    let out = run(&[
        "scan-modulus",
        s(&qq),
        "--grid",
        "-1,1,0,1,3,3",
        "--unit",
        "0,0,1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,abs_f"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn exit_codes() {
    let (d, qq, qi, _, c) = fixtures();
    // passing checks
    assert_eq!(
        run(&["check", "counterexample", "--samples", "2000"])
            .status
            .code(),
        Some(0)
    );
    let out = run(&[
        "check",
        "open-mapping",
        s(&qq),
        "--region",
        "circular:0,1,0.3",
        "--probes",
        "20",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(
        run(&[
            "check",
            "min-modulus",
            s(&qi),
            "--radius",
            "2",
            "--samples",
            "500"
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        run(&[
            "check",
            "max-modulus",
            s(&qq),
            "--radius",
            "0.9",
            "--samples",
            "500"
        ])
        .status
        .code(),
        Some(0)
    );

    // a contract the function does not satisfy: δj near f(i) = 0 is not attained near i
    let out = run(&[
        "check",
        "open-mapping",
        s(&qq),
        "--region",
        "ball:0,1,0,0,0.5",
        "--targets",
        "segment:0,0,1,0",
        "--epsilon",
        "0.05",
        "--probes",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "not-covered");

    // usage and precondition errors
    assert_eq!(run(&["eval", s(&qq)]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["eval", "/nonexistent/f.json", "--at", "0,0,0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "open-mapping", s(&qq)]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "counterexample", "--orthogonal", "1,0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "max-modulus", s(&c), "--samples", "10"])
            .status
            .code(),
        Some(2)
    );
    let no_const = write(
        &d,
        "q.json",
        r#"{"coeffs":[[0,0,0,0],[1,0,0,0]],"flavor":"polynomial"}"#,
    );
    let out = run(&["reciprocal", s(&no_const), "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reciprocal series undefined"));
}

#[test]
fn malformed_files_get_located_diagnostics() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (
            "trailing.json",
            "{\"coeffs\":[[1,0,0,0]],\n\"flavor\":\"polynomial\",}",
            "line 2",
        ),
        (
            "field.json",
            r#"{"coeffs":[[1,0,0,0]],"flavor":"polynomial","degree":3}"#,
            "degree",
        ),
        (
            "version.json",
            r#"{"format_version":2,"coeffs":[[1,0,0,0]],"flavor":"polynomial"}"#,
            "format_version",
        ),
        (
            "order.json",
            r#"{"coeffs":[[1,0,0,0]],"flavor":"truncated"}"#,
            "order",
        ),
    ];
    for (name, text, needle) in cases {
        let path = write(&dir, name, text);
        let out = run(&["eval", s(&path), "--at", "0,0,0,0"]);
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(name) && err.contains(needle), "{err}");
    }
}

#[test]
fn truncated_series_refuse_regions_beyond_trust() {
    let dir = TempDir::new().unwrap();
    let geo = write(
        &dir,
        "geo.json",
        r#"{"coeffs":[[1,0,0,0],[1,0,0,0],[1,0,0,0]],"flavor":"truncated","order":2,"trust_radius":1.0}"#,
    );
    let out = run(&["zeros", s(&geo), "--radius", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trust"));
}

#[test]
fn config_defaults_and_overrides() {
    let v = json(&run(&["config"]));
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["eps_eq"], 1e-9);
    assert_eq!(v["seed"], 42);

    let v = json(&run(&["--set", "seed=7", "config"]));
    assert_eq!(v["seed"], 7);
    let out = bin()
        .env("REGQUAT_EPS_EQ", "1e-10")
        .arg("config")
        .output()
        .unwrap();
    assert_eq!(json(&out)["eps_eq"], 1e-10);

    assert_eq!(
        run(&["--set", "no_such_field=1", "config"]).status.code(),
        Some(2)
    );
}
