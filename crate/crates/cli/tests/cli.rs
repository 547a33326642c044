use std::path::Path;
use std::process::{Command, Output};

use conelab::hermitian::{BipartiteOperator, Sampler};
use serde_json::Value;

fn conelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conelab"))
        .args(args)
        .env_remove("CONELAB_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decomp_membership_outside_the_region() {
    let out = conelab(&["membership", "--cone", "decomp", "--slice", "3", "0"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["status"], "out");
    assert_eq!(v["certificate"]["kind"], "dual_witness");
    assert!(v["certificate"]["pairing"].as_f64().unwrap() < 0.0);
}

#[test]
fn membership_exit_codes_follow_status() {
    let out = conelab(&["membership", "--cone", "decomp", "--slice", "1.5", "0.3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["status"], "in");
    let out = conelab(&["membership", "--cone", "psd", "--slice", "-3", "0"]);
    assert_eq!(code(&out), 1);
    let out = conelab(&["membership", "--cone", "sep", "--slice", "0", "1"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn slice_report() {
    let out = conelab(&["slice", "0", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["region"], "s1");
    assert_eq!(v["psd"], true);
    let v = stdout_json(&conelab(&["slice", "3", "0"]));
    assert_eq!(v["region"], "out");
    assert_eq!(v["psd"], false);
}

#[test]
fn operator_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    let x = Sampler::new(3).bipartite_psd(2, 3);
    std::fs::write(&path, serde_json::to_string(&x).unwrap()).unwrap();
    let back: BipartiteOperator =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, x);
    let out = conelab(&["membership", "--cone", "psd", "--input", path_str(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_inputs_exit_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("malformed", "{\"d\": 2, \"s\": 1,\n \"mat\": [", "line 2"),
        (
            "non_hermitian",
            r#"{"d":2,"s":1,"mat":{"n":2,"entries":[[[1,0],[1,0]],[[0,0],[1,0]]]}}"#,
            "not Hermitian",
        ),
        (
            "wrong_size",
            r#"{"d":2,"s":2,"mat":{"n":2,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}}"#,
            "dimension",
        ),
        (
            "overflow",
            r#"{"d":1,"s":1,"mat":{"n":1,"entries":[[[1e999,0]]]}}"#,
            "line 1",
        ),
    ];
    for (name, text, needle) in cases {
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, text).unwrap();
        let out = conelab(&["membership", "--cone", "psd", "--input", path_str(&path)]);
        assert_eq!(code(&out), 3, "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{name}: {err}");
    }
    let missing = conelab(&[
        "membership",
        "--cone",
        "psd",
        "--input",
        "/nonexistent.json",
    ]);
    assert_eq!(code(&missing), 3);
    let both = conelab(&["membership", "--cone", "nope", "--slice", "0", "0"]);
    assert_eq!(code(&both), 3);
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = conelab(&[
        "scan",
        "--grid",
        "-2",
        "2",
        "-0.5",
        "3",
        "5",
        "4",
        "--out",
        path_str(&path),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["rows"], 20);
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "a,b,region,psd_slice,psd,ppt,decomp,decomp_residual,brute_force"
    );
    assert_eq!(lines.len(), 21);
    assert!(lines[1].starts_with("-2,-0.5,out,"));

    let bad = conelab(&["scan", "--grid", "0", "1", "0", "1", "1.5", "4"]);
    assert_eq!(code(&bad), 3);
}

#[test]
fn kraus_of_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.json");
    let output = dir.path().join("k.json");
    std::fs::write(
        &input,
        serde_json::to_string(&BipartiteOperator::identity(2, 2)).unwrap(),
    )
    .unwrap();
    let out = conelab(&[
        "kraus",
        "--input",
        path_str(&input),
        "--out",
        path_str(&output),
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["kraus"].as_array().unwrap().len(), 4);
    assert_eq!(v["kraus"][0]["rows"], 2);

    let swap = dir.path().join("swap.json");
    let x = BipartiteOperator::identity(2, 2).shift(-2.0);
    std::fs::write(&swap, serde_json::to_string(&x).unwrap()).unwrap();
    assert_eq!(code(&conelab(&["kraus", "--input", path_str(&swap)])), 3);
}

#[test]
fn lift_check_from_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.json");
    std::fs::write(&path, "[[0, 1], [3, 0]]").unwrap();
    let out = conelab(&[
        "lift-check",
        "--d",
        "2",
        "--s",
        "3",
        "--points",
        path_str(&path),
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn seeds_make_runs_identical() {
    let a = conelab(&["--seed", "9", "minmax", "--count", "200"]);
    let b = conelab(&["minmax", "--count", "200", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_conelab"))
        .args(["minmax", "--count", "200"])
        .env("CONELAB_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);

    let x = conelab(&[
        "--threads",
        "1",
        "duality-test",
        "--count",
        "30",
        "--seed",
        "4",
    ]);
    let y = conelab(&[
        "--threads",
        "1",
        "duality-test",
        "--count",
        "30",
        "--seed",
        "4",
    ]);
    assert_eq!(code(&x), 0);
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn minmax_without_gap_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orthant.json");
    std::fs::write(
        &path,
        r#"{"dim":2,"rays":[[1,0],[0,1]],"dual_rays":[[1,0],[0,1]],"order_unit":[1,1]}"#,
    )
    .unwrap();
    let out = conelab(&["minmax", "--cone", path_str(&path), "--count", "5"]);
    assert_eq!(code(&out), 2);
    assert_eq!(stdout_json(&out)["found"], false);
}

#[test]
fn verify_single_criterion() {
    let out = conelab(&["verify", "--criterion", "4"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v[0]["id"], 4);
    assert_eq!(v[0]["passed"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("[PASS]"));
}
