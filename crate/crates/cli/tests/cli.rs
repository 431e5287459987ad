use std::f64::consts::{PI, TAU};
use std::process::{Command, Output};

use serde_json::Value;

fn bipdo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bipdo"))
        .args(args)
        .env_remove("BIPDO_THREADS")
        .output()
        .expect("spawn bipdo")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn check_class_accepts_the_line_symbol() {
    let out = bipdo(&[
        "check-class", "--symbol", "atan(beta-alpha)", "--class", "plain", "--m1", "0", "--m2", "0",
        "--theta", "0.7853981634", "--n", "32",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    assert!(!v["orders"].as_array().unwrap().is_empty());
}

#[test]
fn check_class_failure_exits_one() {
    let out = bipdo(&["check-class", "--symbol", "alpha^2", "--class", "plain", "--theta", "0.5", "--n", "16"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn apply_multiplies_pure_modes() {
    let out = bipdo(&["apply", "--symbol", "1", "--f", "exp(i*2*x)", "--g", "exp(i*3*x)", "--n", "32"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 32);
    for (n, s) in samples.iter().enumerate() {
        let x = n as f64 * TAU / 32.0;
        assert!((s["x"].as_f64().unwrap() - x).abs() < 1e-15);
        assert!((s["re"].as_f64().unwrap() - (5.0 * x).cos()).abs() < 1e-12);
        assert!((s["im"].as_f64().unwrap() - (5.0 * x).sin()).abs() < 1e-12);
    }
}

#[test]
fn apply_csv_has_frozen_columns() {
    let out = bipdo(&["apply", "--symbol", "1", "--f", "1", "--g", "cos(x)", "--n", "8", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,re,im"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn verify_identities_passes() {
    let out = bipdo(&["verify", "--suite", "identities", "--seed", "42", "--n", "32"]);
    let v = json(&out);
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["pass"] != true).collect();
    assert_eq!(code(&out), 0, "{failed:#?}");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["passed"], true);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["verify", "--seed", "3", "--n", "16"];
    let one = Command::new(env!("CARGO_BIN_EXE_bipdo"))
        .args(args)
        .env("BIPDO_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_bipdo"))
        .args(args)
        .env("BIPDO_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(bipdo(&args).stdout, one.stdout);
}

#[test]
fn floats_print_seventeen_significant_digits() {
    let out = bipdo(&["norms", "--f", "exp(i*3*x)", "--s", "2", "--n", "32"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let sob = text.split("\"sobolev\":").nth(1).unwrap().split([',', '}']).next().unwrap();
    let mantissa = sob.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{sob}");
    let v = json(&out);
    let want = 10.0 * (2.0 * PI).sqrt();
    assert!((v["sobolev"].as_f64().unwrap() - want).abs() <= 1e-12 * want);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(code(&bipdo(&["frobnicate"])), 2);
    assert_eq!(code(&bipdo(&["apply", "--symbol", "1", "--f", "x"])), 2);
    assert_eq!(code(&bipdo(&["apply", "--symbol", "1+", "--f", "x", "--g", "x"])), 2);
    assert_eq!(code(&bipdo(&["apply", "--symbol", "1", "--f", "alpha", "--g", "x"])), 2);
    assert_eq!(code(&bipdo(&["verify", "--n", "15"])), 2);
    assert_eq!(code(&bipdo(&["verify", "--format", "xml"])), 2);
    assert_eq!(code(&bipdo(&["verify", "--n", "16", "--tolerance", "no_such_check=1"])), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_bipdo"))
        .args(["verify", "--n", "16"])
        .env("BIPDO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn tolerance_override_can_fail_a_check() {
    let out = bipdo(&["verify", "--n", "16", "--tolerance", "compose_left_pairs=0"]);
    let v = json(&out);
    let check = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "compose_left_pairs").unwrap();
    assert_eq!(check["tolerance"].as_f64(), Some(0.0));
    if check["measured"].as_f64().unwrap() > 0.0 {
        assert_eq!(code(&out), 1);
        assert_eq!(v["passed"], false);
    }
}

#[test]
fn adjoint_reports_pairing_and_series() {
    let out = bipdo(&[
        "adjoint", "--symbol", "sin(x)*exp(-(alpha^2+beta^2)/8)", "--which", "1", "--terms", "2", "--n", "16",
        "--class", "plain", "--theta", "1.0471975511965976",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["series"]["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["adjoint_class"]["spec"]["variant"], "star1");
    let series = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "series_vs_exact").unwrap();
    assert!(series["measured"].as_f64().unwrap() > 0.0);
    assert_eq!(code(&bipdo(&["adjoint", "--symbol", "1", "--which", "3"])), 2);
}

#[test]
fn compose_matches_direct_application() {
    for side in ["right", "left"] {
        let out = bipdo(&[
            "compose", "--side", side, "--symbol", "exp(-(alpha^2+beta^2)/8)*cos(x)", "--tau1", "bracket(xi)",
            "--tau2", "1+sin(x)", "--n", "16", "--trials", "4",
        ]);
        assert_eq!(code(&out), 0, "{side}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn expand_prints_terms_and_remainder_class() {
    let out = bipdo(&[
        "expand", "--kind", "adjoint1", "--symbol", "sin(x)*alpha", "--terms", "3", "--class", "plain", "--theta", "0.5",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[1]["coeff"], "1i");
    assert_eq!(v["remainder_class"]["spec"]["m1"].as_f64(), Some(-3.0));
    let csv = bipdo(&["expand", "--kind", "linear-adjoint", "--tau", "sin(x)*xi", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("term,orders,coeff,expr\n"));
}

#[test]
fn boundedness_study_writes_one_row_per_trial() {
    let out = bipdo(&[
        "study", "boundedness", "--builtin", "theta_line", "--line-theta", "1.0471975511965976", "--profile",
        "atan(xi)", "--trials", "6", "--grids", "16,32", "--seed", "7", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,n_points,trial,p,q,r,s,epsilon,ratio,skipped"));
    assert_eq!(lines.count(), 12);
}

#[test]
fn remainder_study_reports_the_slope_check() {
    let out = bipdo(&[
        "study", "remainder", "--symbol", "sin(x)*bracket(alpha)^1.5*exp(-beta^2)", "--n", "32",
    ]);
    let v = json(&out);
    assert_eq!(v["kind"], "remainder_slope");
    assert_eq!(code(&out), if v["passed"] == true { 0 } else { 1 });
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("bipdo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("norms.csv");
    let out = bipdo(&["norms", "--f", "cos(x)", "--n", "16", "--format", "csv", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("name,value\nlebesgue,"));
    std::fs::remove_dir_all(&dir).unwrap();
}
