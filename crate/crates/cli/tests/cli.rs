use std::process::{Command, Output};

use serde_json::Value;

fn qmes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmes"))
        .args(args)
        .env_remove("QMES_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn gen_mub_shape() {
    let out = qmes(&["gen-mub", "--d", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let bases = v["bases"].as_array().unwrap();
    assert_eq!(bases.len(), 4);
    assert_eq!(bases[0]["b"], "cb");
    for b in bases {
        assert_eq!(b["states"].as_array().unwrap().len(), 3);
        assert_eq!(b["states"][0]["ket"]["dim"], 3);
    }
}

#[test]
fn invalid_dimensions_are_usage_errors() {
    for d in ["2", "9", "1", "0"] {
        let out = qmes(&["gen-mub", "--d", d]);
        assert_eq!(code(&out), 2, "d={d}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(code(&qmes(&["verify", "--d", "15"])), 2);
}

#[test]
fn mes_basis_roundtrips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basis.json");
    let path = path.to_str().unwrap();
    let out = qmes(&["gen-mes-basis", "--d", "3", "--b", "cbdot", "--b-prime", "cbdot", "--out", path]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["states"].as_array().unwrap().len(), 9);
    assert_eq!(doc["b"], "cb");

    let out = qmes(&["verify", "--input", path]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn every_label_pair_gives_a_verified_basis() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basis.json");
    let path = path.to_str().unwrap();
    for b in ["cb", "0", "1", "4"] {
        for b2 in ["cb", "2", "3"] {
            assert_eq!(code(&qmes(&["gen-mes-basis", "--d", "5", "--b", b, "--b-prime", b2, "--out", path])), 0);
            assert_eq!(code(&qmes(&["verify", "--input", path])), 0, "b={b} b'={b2}");
        }
    }
}

#[test]
fn tampered_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basis.json");
    let path = path.to_str().unwrap();
    qmes(&["gen-mes-basis", "--d", "3", "--b", "1", "--b-prime", "1", "--out", path]);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    doc["states"][4]["ket"] = doc["states"][3]["ket"].clone();
    std::fs::write(path, doc.to_string()).unwrap();
    let out = qmes(&["verify", "--input", path]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn bad_inputs_are_usage_errors() {
    assert_eq!(code(&qmes(&["gen-mes-basis", "--d", "3", "--b", "7", "--b-prime", "cb"])), 2);
    assert_eq!(code(&qmes(&["verify", "--input", "/nonexistent/basis.json"])), 2);
    assert_eq!(code(&qmes(&["verify", "--suite", "everything"])), 2);
    assert_eq!(code(&qmes(&["hop", "--d", "3", "--q", "0", "--p", "0", "--steps", "0"])), 2);
}

#[test]
fn verify_all_passes_for_seven() {
    let out = qmes(&["verify", "--d", "7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["d"] == 7 && r["pass"] == true));
}

#[test]
fn default_sweep_covers_three_five_seven() {
    let v = json(&qmes(&["verify", "--suite", "mub"]));
    let mut ds: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["d"].as_u64().unwrap()).collect();
    ds.dedup();
    assert_eq!(ds, vec![3, 5, 7]);
}

#[test]
fn tiny_tolerance_fails_near_machine_epsilon() {
    let out = qmes(&["verify", "--d", "3", "--tol", "1e-30"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    let failed: Vec<&Value> = v["rows"].as_array().unwrap().iter().filter(|r| r["pass"] == false).collect();
    assert!(!failed.is_empty());
    for r in failed {
        assert!(r["max_error"].as_f64().unwrap() < 1e-13, "{r}");
    }
}

#[test]
fn tolerance_precedence_flag_env_default() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qmes"));
        cmd.args(["verify", "--d", "3", "--suite", "mub"]);
        cmd.env_remove("QMES_TOL");
        if let Some(e) = env {
            cmd.env("QMES_TOL", e);
        }
        if let Some(f) = flag {
            cmd.args(["--tol", f]);
        }
        cmd.output().unwrap().status.code().unwrap()
    };
    assert_eq!(run(None, None), 0);
    assert_eq!(run(Some("1e-30"), None), 1);
    assert_eq!(run(Some("1e-30"), Some("1e-10")), 0);
    assert_eq!(run(None, Some("1e-30")), 1);
}

#[test]
fn lines_suite_row_count() {
    let out = qmes(&["verify", "--d", "5", "--suite", "lines", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,d,params,max_error,pass"));
    assert_eq!(lines.count(), 30);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["verify", "--d", "3,5"][..],
        &["verify", "--d", "3", "--format", "csv", "--seed", "9"][..],
        &["lines", "--d", "5", "--format", "csv"][..],
        &["gen-mub", "--d", "5"][..],
    ] {
        let a = qmes(args);
        let b = qmes(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timings_are_opt_in() {
    let plain = json(&qmes(&["verify", "--d", "3", "--suite", "mub"]));
    assert!(plain["rows"][0].get("runtime_ms").is_none());
    let timed = json(&qmes(&["verify", "--d", "3", "--suite", "mub", "--timings"]));
    assert!(timed["rows"][0]["runtime_ms"].is_number());
}

#[test]
fn hop_worked_example() {
    let out = qmes(&["hop", "--d", "7", "--q", "1", "--p", "2", "--word", "Xc^2 Xr^6"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["word"], "Xc^2 Xr^6");
    let step = &v["steps"][0];
    assert_eq!(step["point"], serde_json::json!({"q": 3, "p": 2}));
    assert_eq!(step["phase_exponent"], 5);
    assert_eq!(step["dense_phase_exponent"], 5);
    assert_eq!(step["agree"], true);
}

#[test]
fn hop_identity_and_echo() {
    let v = json(&qmes(&["hop", "--d", "5", "--q", "3", "--p", "4", "--word", ""]));
    assert_eq!(v["word"], "I");
    assert_eq!(v["steps"][0]["point"], serde_json::json!({"q": 3, "p": 4}));
    assert_eq!(v["steps"][0]["phase_exponent"], 0);

    let v = json(&qmes(&["hop", "--d", "5", "--q", "0", "--p", "0", "--word", "  Xc^1   Zr^-1 "]));
    assert_eq!(v["word"], "Xc Zr^-1");
}

#[test]
fn hop_trajectory_wraps_around() {
    let v = json(&qmes(&["hop", "--d", "5", "--q", "1", "--p", "3", "--word", "Xc", "--steps", "5"]));
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 5);
    assert_eq!(steps[4]["point"], serde_json::json!({"q": 1, "p": 3}));
    assert!(steps.iter().all(|s| s["agree"] == true));
}

#[test]
fn malformed_word_is_usage_error() {
    let out = qmes(&["hop", "--d", "7", "--q", "1", "--p", "2", "--word", "Xq^2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Xq^2"));
}

#[test]
fn lines_table_columns() {
    let out = qmes(&["lines", "--d", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(
        rows[0],
        "d,b,m,schmidt_rank_ok,factor_label_b,factor_label_m,global_phase_exponent,max_error"
    );
    assert_eq!(rows.len(), 1 + 12);
    // b=1, m=1 factors through |m/2; b/4⟩ = |2; 1⟩ in d=3.
    assert!(rows.iter().any(|r| r.starts_with("3,1,1,true,1,2,0,")));
}

#[test]
fn plus_points_are_exploratory() {
    let out = qmes(&["lines", "--d", "5", "--points", "plus"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().all(|r| r.get("pass").is_none() && r["points"] == "plus"));
}
