use qes_cli::commands::{EXIT_INPUT, EXIT_OK, EXIT_VERIFY};
use qes_cli::run;
use serde_json::Value;

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(std::iter::once("qes").chain(args.iter().copied()));
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (serde_json::from_str(&out.stdout).expect("json output"), out.code)
}

#[test]
fn solve_envelope() {
    let (v, code) = json(&["solve", "--preset", "sextic", "--a", "1", "--b", "1", "--N", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["tool"], "qes");
    assert_eq!(v["command"], "solve");
    assert_eq!(v["result"]["found"], 3);
    assert_eq!(v["result"]["complete"], true);
}

#[test]
fn spec_round_trips_through_build_output() {
    let (v, _) = json(&["build", "--preset", "pt-quartic", "--N", "1"]);
    let spec = v["spec"].to_string();
    let (w, code) = json(&["solve", "--spec", &spec]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(w["spec"], v["spec"]);
    assert_eq!(w["result"]["pt_symmetry"]["status"], "PT unbroken");
}

#[test]
fn spec_file_and_out_file() {
    let dir = std::env::temp_dir().join(format!("qes-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("spec.json");
    std::fs::write(&spec, r#"{"P": [[0, 0], [0, 0], [2, 0]], "Q": [[0, 0], [4, 0]], "N": 1}"#).unwrap();
    let out = dir.join("out.json");
    let res = run(["qes", "solve", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(res.code, EXIT_OK, "{}", res.stderr);
    assert!(res.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["found"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_errors_exit_1() {
    for args in [
        &["qes", "solve", "--preset", "nope"][..],
        &["qes", "solve", "--preset", "harmonic", "--ell", "2"][..],
        &["qes", "solve", "--spec", "{\"P\": [[1, 0]]}"][..],
        &["qes", "solve", "--spec", "/nonexistent/spec.json"][..],
        &["qes", "solve"][..],
        &["qes", "frobnicate"][..],
        &["qes", "extended", "--ell", "1", "--alpha", "-0.5"][..],
    ] {
        let out = run(args.iter().copied());
        assert_eq!(out.code, EXIT_INPUT, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_0() {
    let out = run(["qes", "--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("plot-data"));
}

#[test]
fn verify_reports_failures_with_exit_2() {
    let (v, code) = json(&["verify", "--preset", "sextic", "--N", "2", "--grid", "0:12:61"]);
    assert_eq!(code, EXIT_VERIFY);
    assert_eq!(v["result"]["pass"], false);
}

#[test]
fn classify_single_state_model() {
    let spec = r#"{"P": [[0, 0], [0, 0], [0, 0], [1, 0]], "Q": [[1, 0]], "N": 0}"#;
    let (v, code) = json(&["classify", "--spec", spec]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["solvability"], "SingleState");
}

#[test]
fn states_csv_shape() {
    let out = run(["qes", "states", "--preset", "harmonic", "--N", "2", "--stride", "100"]);
    assert_eq!(out.code, EXIT_OK);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next().unwrap(), "state,energy_re,energy_im,x,V_re,V_im,phi_re,phi_im");
    assert!(lines.all(|l| l.split(',').count() == 8));
}

#[test]
fn extended_defaults_to_x_laguerre() {
    let (v, code) = json(&["extended"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["spec"]["ell"], 1);
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["result"]["states"][0]["energy"], 6.0);
}
