use std::process::{Command, Output};

fn slopes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slopes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_printed_forms() {
    let o = slopes(&["expand", "theta", "--terms", "5", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1, 6, 0, 6, 6");
    let o = slopes(&["expand", "y", "--terms", "5", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "0, 1, 0, 0, -5");
    let o = slopes(&[
        "expand",
        "E_kappa",
        "--conductor",
        "9",
        "--terms",
        "3",
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&o).trim(), "1, 1 - ζ, 3");
}

#[test]
fn expand_json_and_csv_carry_precision() {
    let o = slopes(&["expand", "E_kappa", "--terms", "3"]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows[1]["coefficient"], "1 - ζ");
    assert!(rows[1]["precision"].as_u64().unwrap() <= 48);
    let o = slopes(&["expand", "delta", "--terms", "3", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "exponent,coefficient,precision\n0,\"0\",exact\n1,\"1\",exact\n2,\"-24\",exact\n"
    );
}

#[test]
fn expand_in_y_coordinate() {
    // f = y(1 + 3y + 9y²)/(1 - 3y)³
    let o = slopes(&[
        "expand",
        "f",
        "--coordinate",
        "y",
        "--terms",
        "4",
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&o).trim(), "0, 1, 12, 90");
}

#[test]
fn expand_rejects_bad_input() {
    assert_eq!(slopes(&["expand", "sigma"]).status.code(), Some(2));
    assert_eq!(
        slopes(&["expand", "E_classical", "--weight", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(slopes(&["expand", "E_classical"]).status.code(), Some(2));
}

#[test]
fn config_validation_exits_two() {
    for args in [
        vec!["slopes", "--beta", "20"],
        vec!["slopes", "--beta", "21", "--alpha-max", "8"],
        vec!["slopes", "--q-prec", "10", "--y-prec", "27"],
        vec!["slopes", "--conductor", "3"],
        vec!["slopes", "--conductor", "12"],
    ] {
        let o = slopes(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = slopes(&["slopes", "--conductor", "3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1/3 < |w0| < 1"));
}

#[test]
fn verify_suites_pass() {
    for suite in [
        "fund-lemma",
        "member-lemma",
        "eisenstein",
        "residue",
        "strip-lemma",
    ] {
        let o = slopes(&["verify", "--suite", suite, "--format", "text"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(!stdout(&o).contains("[FAIL]"));
    }
    let o = slopes(&["verify", "--suite", "residue", "--format", "text"]);
    assert!(stdout(&o).contains("α ≤ 24") || stdout(&o).contains("24"));
}

#[test]
fn slopes_report_is_deterministic() {
    let a = slopes(&["slopes"]);
    let b = slopes(&["slopes"]);
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["v"], serde_json::json!({"num": 1, "den": 2}));
    assert_eq!(r["beta"], 27);
    assert_eq!(r["stable"], true);
    assert_eq!(r["slopes"].as_array().unwrap().len(), 8);
}

// The exact slopes are 0, 2v, 4v, …; the report flags the missing 0, v, 2v, …
// progression and the command exits with the check-failure code.
#[test]
fn slopes_observed_progression() {
    let o = slopes(&["slopes"]);
    assert_eq!(o.status.code(), Some(1));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["progression"], false);
    assert_eq!(
        r["common_difference"],
        serde_json::json!({"num": 1, "den": 1})
    );
    let o = slopes(&[
        "slopes",
        "--conductor",
        "27",
        "--alpha-max",
        "6",
        "--beta",
        "21",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["v"], serde_json::json!({"num": 1, "den": 6}));
    assert_eq!(
        r["common_difference"],
        serde_json::json!({"num": 1, "den": 3})
    );
}

#[test]
fn precision_exhaustion_suggests_larger_n() {
    let o = slopes(&["slopes", "--precision", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N = 24"));
}

#[test]
fn matrix_output_and_output_file() {
    let dir = std::env::temp_dir().join(format!("slopes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.csv");
    let o = slopes(&[
        "matrix",
        "--beta",
        "6",
        "--alpha-max",
        "1",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("i,j,coefficient,precision\n0,0,\"1\","));
    assert_eq!(csv.lines().count(), 1 + 36);
    let gf = slopes(&[
        "matrix",
        "--beta",
        "9",
        "--alpha-max",
        "2",
        "--format",
        "text",
    ]);
    let qs = slopes(&[
        "matrix",
        "--beta",
        "9",
        "--alpha-max",
        "2",
        "--format",
        "text",
        "--method",
        "qspace",
    ]);
    assert_eq!(gf.stdout, qs.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
