use std::process::{Command, Output};

fn loopcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopcoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn parse_prints_canonical_ir() {
    let out = loopcoh(&["parse", "(y*(x*(y*z))) = ((y*(x*y))*z)"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        r#"{"n":4,"rho":[1,2,1,3],"start":2,"moves":["LEFT","RIGHT"]}"#
    );
}

#[test]
fn parse_error_suggests_commutativity() {
    let out = loopcoh(&["parse", "(x*y)=(y*x)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("commutativity"), "{}", stderr(&out));
}

#[test]
fn parse_empty_input_is_a_usage_error() {
    let out = loopcoh(&["parse", ""]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn diff_lists_six_bol_terms() {
    let out = loopcoh(&["diff", "--law", "bol-unrepeated", "--output", "text"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.trim().lines().count(), 6, "{text}");
    assert!(text.contains("- f(y, z)"), "{text}");

    let out = loopcoh(&["diff", "--law", "bol"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(r#""rho":[1,2,1,3]"#));
}

#[test]
fn diff_rejects_laws_without_an_identity() {
    let out = loopcoh(&["diff", "--law", "commutativity"]);
    assert_eq!(out.status.code(), Some(2));
    let out = loopcoh(&["diff", "--law", "(x*y) = (x*y)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cohomology_bol_3_2_counts() {
    let out = loopcoh(&["cohomology", "--law", "bol", "--n", "3", "--m", "2"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(json["cocycles"], 4);
    assert_eq!(json["coboundaries"], 4);
    assert_eq!(json["h2"], 1);
}

#[test]
fn cohomology_commutativity_flags_formula_mismatch() {
    let out = loopcoh(&["cohomology", "--law", "commutativity", "--n", "3", "--m", "2"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(json["cocycles"], 8);
    assert_eq!(json["h2"], 2);
    assert_eq!(json["closedFormH2"], 1.5);
    assert_eq!(json["h2FormulaMismatch"], true);
}

#[test]
fn cohomology_output_is_deterministic() {
    let args = ["cohomology", "--law", "bol", "--n", "3", "--m", "3"];
    let a = loopcoh(&args);
    let b = loopcoh(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_module_is_a_usage_error() {
    let out = loopcoh(&["cohomology", "--law", "bol", "--n", "3", "--m", "3", "--t", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_bol_emits_one_class() {
    let out = loopcoh(&["classify", "--law", "bol", "--n", "3", "--m", "2"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let classes = json.as_array().unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0]["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_suite_passes() {
    let out = loopcoh(&["verify"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}
