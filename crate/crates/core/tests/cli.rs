use std::process::{Command, Output};

use serde_json::Value;

fn kpsym(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kpsym"));
    for var in [
        "KPSYM_ALG",
        "KPSYM_LEVEL",
        "KPSYM_FORMAT",
        "KPSYM_OUT",
        "KPSYM_TOL_U",
        "KPSYM_TOL_F",
        "KPSYM_BOUND",
    ] {
        cmd.env_remove(var);
    }
    cmd.args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn smatrix_a1_level1() {
    let o = kpsym(&["smatrix", "--alg", "a1", "--level", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["n"], 2);
    let e = v["entries"].as_array().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (z, re) in e.iter().zip([h, h, h, -h]) {
        assert!((z[0].as_f64().unwrap() - re).abs() < 1e-14);
        assert!(z[1].as_f64().unwrap().abs() < 1e-14);
    }
}

#[test]
fn fusion_check_passes() {
    let o = kpsym(&["fusion", "--alg", "a1", "--level", "1", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["triples"], 8);
    assert_eq!(v["pass"], true);
    let o = kpsym(&["fusion", "--alg", "a2", "--level", "3", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn fusion_restricted_rows() {
    let o = kpsym(&["fusion", "--alg", "a1", "--level", "2", "--lambda", "[[1,1]]", "--mu", "[[1,1]]"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["N"] == 1));
}

#[test]
fn verify_confirms() {
    let o = kpsym(&["verify", "--alg", "a2", "--level", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "2 invariants, classification confirmed\n");
    let o = kpsym(&["verify", "--alg", "a1,a1", "--level", "2,2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn mismatch_exit_code() {
    // at a vanishing tolerance rounding noise rejects the conjugation
    let o = kpsym(&["verify", "--alg", "a2", "--level", "3", "--tol-u", "1e-300"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn usage_errors() {
    for args in [
        vec!["smatrix"],
        vec!["smatrix", "--alg", "b2", "--level", "1"],
        vec!["smatrix", "--alg", "a1,a2", "--level", "1"],
        vec!["smatrix", "--alg", "a1", "--level", "1", "--tol-u", "-1"],
        vec!["fusion", "--alg", "a1", "--level", "1", "--lambda", "[[3,0]]"],
        vec!["galois", "--alg", "a1", "--level", "1", "--ell", "2"],
        vec!["search", "--alg", "a3", "--level", "3", "--bound", "5"],
        vec!["frobnicate"],
    ] {
        let o = kpsym(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(kpsym(&["--help"]).status.code(), Some(0));
}

#[test]
fn outputs_are_byte_deterministic() {
    for cmd in ["weights", "smatrix", "tvector", "qdim", "fusion", "classify", "search", "galois"] {
        for fmt in ["json", "csv"] {
            let args = [cmd, "--alg", "a2,a1", "--level", "2,2", "--format", fmt];
            let a = kpsym(&args);
            let b = kpsym(&args);
            assert_eq!(a.status.code(), Some(0), "{cmd} {fmt}");
            assert!(!a.stdout.is_empty());
            assert_eq!(a.stdout, b.stdout, "{cmd} {fmt}");
        }
    }
}

#[test]
fn environment_and_out_file() {
    let path = std::env::temp_dir().join(format!("kpsym-cli-{}.json", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_kpsym"))
        .args(["tvector", "--out", path.to_str().unwrap()])
        .env("KPSYM_ALG", "a1")
        .env("KPSYM_LEVEL", "1")
        .env_remove("KPSYM_FORMAT")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["texp"], serde_json::json!(["23/12", "5/12"]));
}

#[test]
fn classify_labels() {
    let o = kpsym(&["classify", "--alg", "a3", "--level", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for item in v.as_array().unwrap() {
        assert_eq!(item["label"]["type"], "C^a sigma_m");
    }
}
