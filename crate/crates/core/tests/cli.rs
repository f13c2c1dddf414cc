use std::path::PathBuf;
use std::process::Command;

use bellcert::table::parse_table;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bellcert"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scenario_file(id: &str) -> String {
    let path = scratch(&format!("{id}.json"));
    let p = path.to_str().unwrap();
    assert_eq!(run(&["scenario", id, "--out", p]).0, 0);
    p.to_string()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(run(&["validate", &scenario_file("chsh")]).0, 0);

    let bad = scratch("range.json");
    std::fs::write(
        &bad,
        r#"{"n_x":1,"n_y":1,"n_a":1,"n_b":2,"entries":[[[[1.5, 0]]]]}"#,
    )
    .unwrap();
    let (code, out, _) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("range"), "{out}");
    let (code, out, _) = run(&["validate", "--format", "json", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["violations"][0]["kind"], "range");

    let malformed = scratch("malformed.json");
    std::fs::write(&malformed, "{ not json").unwrap();
    assert_eq!(run(&["validate", malformed.to_str().unwrap()]).0, 2);

    let missing = scratch("missing.json");
    std::fs::write(&missing, r#"{"n_x":1,"n_y":1,"n_a":2,"entries":[]}"#).unwrap();
    let (code, _, err) = run(&["validate", missing.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("n_b"), "{err}");
}

#[test]
fn certify_reports() {
    let (code, out, _) = run(&["certify", "--format", "json", &scenario_file("chsh")]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert!((doc["purity_bound"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(doc["dim_lower_bound"], 2);

    let (_, out, _) = run(&["certify", "--format", "json", &scenario_file("partial-3x3")]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["lambda_min_bound_exact"], "18/125");
    assert!(doc["purity_bound"].is_null() && doc["f1"].is_null());

    let (_, out, _) = run(&["certify", "--format", "json", &scenario_file("pr-box")]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["dim_lower_bound"], "no_finite_dim");

    let (_, text, _) = run(&["certify", &scenario_file("bb84")]);
    assert!(text.contains("(= 1/2)"), "{text}");
}

#[test]
fn certify_is_byte_deterministic() {
    let f = scenario_file("magic-square");
    let a = run(&[
        "certify", "--format", "json", "--eta", "1e-6", "--dim", "4", &f,
    ]);
    let b = run(&[
        "certify", "--format", "json", "--eta", "1e-6", "--dim", "4", &f,
    ]);
    assert_eq!(a, b);
    let doc: Value = serde_json::from_str(&a.1).unwrap();
    let ef = doc["entanglement_of_formation"]["value"].as_f64().unwrap();
    assert!((ef - 1.947_769_432_153_427).abs() < 1e-9);
}

#[test]
fn tolerance_overrides_are_echoed() {
    let f = scenario_file("chsh");
    let (_, out, _) = run(&[
        "certify",
        "--format",
        "json",
        "--tol-norm",
        "1e-6",
        "--epsilon-p",
        "1e-8",
        &f,
    ]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["tolerances"]["norm"], 1e-6);
    assert_eq!(doc["epsilon_p"], 1e-8);
    assert_eq!(run(&["certify", "--tol-zero", "-1", &f]).0, 2);
}

const EPR_Z: &str = r#"{"state":{"kind":"pure","matrix":[[[0.7071067811865476,0],[0,0]],[[0,0],[0.7071067811865476,0]]]},
 "povms_a":[[[[1,0],[0,0]],[[0,0],[0,1]]]],
 "povms_b":[[[[1,0],[0,0]],[[0,0],[0,1]]]]}"#;

#[test]
fn simulate_spec_and_chain() {
    let spec = scratch("epr.json");
    std::fs::write(&spec, EPR_Z).unwrap();
    let (code, out, _) = run(&["simulate", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    let t = parse_table(&out).unwrap();
    assert!((t.p(0, 0, 0, 0).unwrap() - 0.5).abs() < 1e-15);
    assert!(t.p(0, 0, 0, 1).unwrap().abs() < 1e-15);

    let table_out = scratch("epr_table.json");
    let (code, out, _) = run(&[
        "simulate",
        spec.to_str().unwrap(),
        "--certify",
        "--format",
        "json",
        "--out",
        table_out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert!((doc["purity_bound"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(parse_table(&std::fs::read_to_string(&table_out).unwrap()).is_ok());
}

#[test]
fn simulate_rejects_bad_effect() {
    let spec = scratch("bad_effect.json");
    std::fs::write(
        &spec,
        r#"{"state":{"kind":"pure","matrix":[[1]]},"povms_a":[[[[1.5]],[[-0.5]]]],"povms_b":[[[[1]]]]}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["simulate", spec.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("not positive semidefinite"), "{err}");
}

#[test]
fn scenario_output() {
    let (code, out, _) = run(&["scenario", "magic-square"]);
    assert_eq!(code, 0);
    let t = parse_table(&out).unwrap();
    assert_eq!((t.shape().n_x, t.shape().n_a), (3, 8));
    let (code, _, err) = run(&["scenario", "unknown-name"]);
    assert_eq!(code, 2);
    assert!(err.contains("partial-3x3"));
}

#[test]
fn exclude_verdicts() {
    let (code, out, _) = run(&[
        "exclude",
        "--dim",
        "7",
        "--format",
        "json",
        &scenario_file("partial-3x3"),
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let verdicts: Vec<(u64, bool)> = doc["maximally_entangled"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["dim"].as_u64().unwrap(), v["excluded"].as_bool().unwrap()))
        .collect();
    assert_eq!(
        verdicts,
        vec![
            (2, true),
            (3, true),
            (4, true),
            (5, true),
            (6, true),
            (7, false)
        ]
    );
    assert_eq!(doc["two_qubit_exclusion"]["lower_exact"], "18/125");
    assert_eq!(doc["two_qubit_exclusion"]["upper_exact"], "107/125");

    let (_, out, _) = run(&["exclude", "--dim", "2", &scenario_file("bb84")]);
    assert!(out.contains("dimension 2: not excluded"), "{out}");
    assert!(out.contains("weights: none"));

    let product = scratch("product.json");
    std::fs::write(
        &product,
        r#"{"n_x":1,"n_y":1,"n_a":2,"n_b":2,"entries":[[[["1/4","1/4"],["1/4","1/4"]]]]}"#,
    )
    .unwrap();
    let (_, out, _) = run(&["exclude", "--dim", "5", product.to_str().unwrap()]);
    assert!(!out.contains(": excluded"), "{out}");
}

#[test]
fn garbage_input_never_panics() {
    let cases = [
        "",
        "[]",
        "null",
        r#"{"n_x":0}"#,
        r#"{"n_x":1,"n_y":1,"n_a":1,"n_b":1,"entries":[[[[1e400]]]]}"#,
    ];
    for (k, text) in cases.iter().enumerate() {
        let f = scratch(&format!("garbage{k}.json"));
        std::fs::write(&f, text).unwrap();
        for cmd in ["validate", "certify", "exclude", "simulate"] {
            let (code, _, err) = run(&[cmd, f.to_str().unwrap()]);
            assert_eq!(code, 2, "{cmd} {text}: {err}");
            assert!(!err.contains("panicked"));
        }
    }
}
