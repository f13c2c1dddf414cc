//! JSON format for experiment specifications.
//!
//! ```json
//! { "state": { "kind": "pure", "matrix": [[[0.7071067811865476, 0], [0, 0]],
//!                                         [[0, 0], [0.7071067811865476, 0]]] },
//!   "povms_a": [ [ M_00, M_01 ], [ M_10, M_11 ] ],
//!   "povms_b": [ ... ] }
//! ```
//!
//! Matrices are row-major nested arrays of `[re, im]` pairs; a bare number is
//! accepted as a real entry. A pure state gives the `d_A × d_B` amplitude
//! matrix. A mixed state uses `"kind": "mixed"`, the joint density matrix and
//! `"dims": [d_A, d_B]`.

use serde_json::{json, Value};

use super::linalg::{c, CMatrix};
use super::{ExperimentSpec, MixedState, Povm, PureState, SharedState};
use crate::table::ParseError;

fn err(path: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError {
        path: path.into(),
        message: message.into(),
    }
}

pub fn parse_experiment(text: &str) -> Result<ExperimentSpec, ParseError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| err("$", format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| err("$", "expected an object"))?;
    let state_v = obj
        .get("state")
        .ok_or_else(|| err("state", "missing field"))?;
    let state = parse_state(state_v)?;
    let povms_a = parse_family(obj.get("povms_a"), "povms_a")?;
    let povms_b = parse_family(obj.get("povms_b"), "povms_b")?;
    ExperimentSpec::new(state, povms_a, povms_b).map_err(|e| err("$", e.to_string()))
}

fn parse_state(v: &Value) -> Result<SharedState, ParseError> {
    let obj = v
        .as_object()
        .ok_or_else(|| err("state", "expected an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| err("state.kind", "expected \"pure\" or \"mixed\""))?;
    let m = parse_matrix(
        obj.get("matrix")
            .ok_or_else(|| err("state.matrix", "missing field"))?,
        "state.matrix",
    )?;
    match kind {
        "pure" => PureState::new(m)
            .map(SharedState::Pure)
            .map_err(|e| err("state.matrix", e.to_string())),
        "mixed" => {
            let dims = obj
                .get("dims")
                .and_then(Value::as_array)
                .filter(|d| d.len() == 2)
                .ok_or_else(|| err("state.dims", "expected [d_A, d_B]"))?;
            let mut ds = [0usize; 2];
            for (k, d) in dims.iter().enumerate() {
                ds[k] = match d.as_u64() {
                    Some(n) if n > 0 => n as usize,
                    _ => {
                        return Err(err(
                            format!("state.dims[{k}]"),
                            "expected a positive integer",
                        ))
                    }
                };
            }
            MixedState::new(m, ds[0], ds[1])
                .map(SharedState::Mixed)
                .map_err(|e| err("state.matrix", e.to_string()))
        }
        other => Err(err("state.kind", format!("unknown state kind \"{other}\""))),
    }
}

fn parse_family(v: Option<&Value>, path: &str) -> Result<Vec<Povm>, ParseError> {
    let list = v
        .ok_or_else(|| err(path, "missing field"))?
        .as_array()
        .ok_or_else(|| err(path, "expected an array of POVMs"))?;
    list.iter()
        .enumerate()
        .map(|(x, pv)| {
            let p = format!("{path}[{x}]");
            let effects = pv
                .as_array()
                .ok_or_else(|| err(&p, "expected an array of effects"))?
                .iter()
                .enumerate()
                .map(|(a, m)| parse_matrix(m, &format!("{p}[{a}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Povm::new(effects).map_err(|e| err(&p, e.to_string()))
        })
        .collect()
}

fn parse_entry(v: &Value, path: &str) -> Result<num_complex::Complex64, ParseError> {
    if let Some(re) = v.as_f64() {
        return Ok(c(re, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(c(re, im)),
            _ => Err(err(path, "expected [re, im] numbers")),
        },
        _ => Err(err(path, "expected [re, im] or a number")),
    }
}

fn parse_matrix(v: &Value, path: &str) -> Result<CMatrix, ParseError> {
    let rows = v
        .as_array()
        .ok_or_else(|| err(path, "expected an array of rows"))?;
    if rows.is_empty() {
        return Err(err(path, "empty matrix"));
    }
    let mut data = Vec::new();
    let mut ncols = None;
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| err(&rp, "expected a row array"))?;
        match ncols {
            None if entries.is_empty() => return Err(err(&rp, "empty row")),
            None => ncols = Some(entries.len()),
            Some(n) if n != entries.len() => {
                return Err(err(
                    &rp,
                    format!("row has {} entries, expected {n}", entries.len()),
                ))
            }
            _ => {}
        }
        for (j, e) in entries.iter().enumerate() {
            data.push(parse_entry(e, &format!("{rp}[{j}]"))?);
        }
    }
    Ok(CMatrix::from_row_slice(
        rows.len(),
        ncols.unwrap_or(0),
        &data,
    ))
}

fn matrix_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn family_value(povms: &[Povm]) -> Value {
    Value::Array(
        povms
            .iter()
            .map(|p| Value::Array(p.effects().iter().map(matrix_value).collect()))
            .collect(),
    )
}

pub fn experiment_to_json(spec: &ExperimentSpec) -> String {
    let state = match spec.state() {
        SharedState::Pure(s) => json!({ "kind": "pure", "matrix": matrix_value(s.amplitudes()) }),
        SharedState::Mixed(s) => {
            let (da, db) = s.dims();
            json!({ "kind": "mixed", "dims": [da, db], "matrix": matrix_value(s.matrix()) })
        }
    };
    let doc = json!({
        "state": state,
        "povms_a": family_value(spec.povms_a()),
        "povms_b": family_value(spec.povms_b()),
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}
