//! Reading a table from JSON, in either the dense or the sparse layout.

use bellcert::table::{parse_table, to_json, Level};
use bellcert::Tolerances;

const SPARSE: &str = r#"{
  "n_x": 1, "n_y": 1, "n_a": 2, "n_b": 2,
  "entries": [
    {"x": 0, "y": 0, "a": 0, "b": 0, "p": "1/2"},
    {"x": 0, "y": 0, "a": 1, "b": 1, "p": 0.5}
  ]
}"#;

fn main() {
    let t = parse_table(SPARSE).unwrap();
    println!("complete: {}, exact: {}", t.is_complete(), t.is_exact());
    let report = t.validate(Level::Basic, &Tolerances::default());
    println!("violations: {}", report.violations.len());
    print!("{}", to_json(&t));

    let bad = r#"{"n_x": 1, "n_y": 1, "n_a": 1, "n_b": 1, "entries": [[[["one"]]]]}"#;
    println!("{}", parse_table(bad).unwrap_err());
}
