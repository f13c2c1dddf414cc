//! JSON document format for tables.
//!
//! ```json
//! { "n_x": 1, "n_y": 1, "n_a": 2, "n_b": 2,
//!   "entries": [[[[ "1/2", 0 ], [ 0, 0.5 ]]]] }
//! ```
//!
//! `entries` is either a dense `[x][y][a][b]` nested array with `null` for
//! unspecified entries, or a sparse list of `{x, y, a, b, p}` records.
//! Values are JSON numbers or strings holding an exact rational (`"num/den"`)
//! or decimal literal. Output is always dense; exact entries are written as
//! rational strings and float entries as shortest round-trip numbers.

use std::fmt::Write as _;

use serde_json::Value;

use super::{format_ratio, BehaviorTable, Index, Prob, Shape, TableBuilder};

/// Input error naming the offending field by its JSON path.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl ParseError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub fn parse_table(text: &str) -> Result<BehaviorTable, ParseError> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| ParseError::new("$", format!("invalid JSON: {e}")))?;
    table_from_value(&doc)
}

fn table_from_value(doc: &Value) -> Result<BehaviorTable, ParseError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| ParseError::new("$", "expected an object"))?;
    let dim = |key: &str| -> Result<usize, ParseError> {
        let v = obj
            .get(key)
            .ok_or_else(|| ParseError::new(key, "missing field"))?;
        match v.as_u64() {
            Some(n) if n > 0 => Ok(n as usize),
            _ => Err(ParseError::new(key, "expected a positive integer")),
        }
    };
    let shape = Shape {
        n_x: dim("n_x")?,
        n_y: dim("n_y")?,
        n_a: dim("n_a")?,
        n_b: dim("n_b")?,
    };
    let entries = obj
        .get("entries")
        .ok_or_else(|| ParseError::new("entries", "missing field"))?;
    let list = entries
        .as_array()
        .ok_or_else(|| ParseError::new("entries", "expected an array"))?;

    let mut builder = TableBuilder::new(shape);
    if list.first().is_some_and(Value::is_object) {
        parse_sparse(list, shape, &mut builder)?;
    } else {
        parse_dense(list, shape, &mut builder)?;
    }
    Ok(builder.build())
}

fn parse_dense(list: &[Value], shape: Shape, builder: &mut TableBuilder) -> Result<(), ParseError> {
    let dims = [shape.n_x, shape.n_y, shape.n_a, shape.n_b];
    check_len(list, dims[0], "entries")?;
    for (x, vx) in list.iter().enumerate() {
        let px = format!("entries[{x}]");
        let lx = as_array(vx, &px)?;
        check_len(lx, dims[1], &px)?;
        for (y, vy) in lx.iter().enumerate() {
            let py = format!("{px}[{y}]");
            let ly = as_array(vy, &py)?;
            check_len(ly, dims[2], &py)?;
            for (a, va) in ly.iter().enumerate() {
                let pa = format!("{py}[{a}]");
                let la = as_array(va, &pa)?;
                check_len(la, dims[3], &pa)?;
                for (b, vb) in la.iter().enumerate() {
                    if vb.is_null() {
                        continue;
                    }
                    let pb = format!("{pa}[{b}]");
                    let p = parse_prob(vb, &pb)?;
                    builder
                        .set(Index { x, y, a, b }, p)
                        .map_err(|e| ParseError::new(pb, e.to_string()))?;
                }
            }
        }
    }
    Ok(())
}

fn parse_sparse(
    list: &[Value],
    shape: Shape,
    builder: &mut TableBuilder,
) -> Result<(), ParseError> {
    for (i, rec) in list.iter().enumerate() {
        let path = format!("entries[{i}]");
        let obj = rec
            .as_object()
            .ok_or_else(|| ParseError::new(&path, "expected a {x, y, a, b, p} record"))?;
        let field = |key: &str, bound: usize| -> Result<usize, ParseError> {
            let v = obj.get(key).and_then(Value::as_u64).ok_or_else(|| {
                ParseError::new(format!("{path}.{key}"), "expected a non-negative integer")
            })?;
            let v = v as usize;
            if v >= bound {
                return Err(ParseError::new(
                    format!("{path}.{key}"),
                    format!("index {v} out of range (limit {bound})"),
                ));
            }
            Ok(v)
        };
        let idx = Index {
            x: field("x", shape.n_x)?,
            y: field("y", shape.n_y)?,
            a: field("a", shape.n_a)?,
            b: field("b", shape.n_b)?,
        };
        let pv = obj
            .get("p")
            .ok_or_else(|| ParseError::new(format!("{path}.p"), "missing field"))?;
        if pv.is_null() {
            continue;
        }
        let p = parse_prob(pv, &format!("{path}.p"))?;
        if builder.is_set(idx) {
            return Err(ParseError::new(&path, format!("duplicate entry for {idx}")));
        }
        builder
            .set(idx, p)
            .map_err(|e| ParseError::new(&path, e.to_string()))?;
    }
    Ok(())
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array()
        .ok_or_else(|| ParseError::new(path, "expected an array"))
}

fn check_len(list: &[Value], n: usize, path: &str) -> Result<(), ParseError> {
    if list.len() != n {
        return Err(ParseError::new(
            path,
            format!("expected {n} elements, found {}", list.len()),
        ));
    }
    Ok(())
}

fn parse_prob(v: &Value, path: &str) -> Result<Prob, ParseError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(Prob::from_f64)
            .ok_or_else(|| ParseError::new(path, "number not representable as f64")),
        Value::String(s) => Prob::parse_exact(s).map_err(|e| ParseError::new(path, e.to_string())),
        _ => Err(ParseError::new(
            path,
            "expected a number, a rational string, or null",
        )),
    }
}

fn prob_to_json(p: &Prob) -> String {
    match p.exact() {
        Some(r) => Value::String(format_ratio(r)).to_string(),
        None => serde_json::Number::from_f64(p.value())
            .map(|n| n.to_string())
            .unwrap_or_else(|| "null".to_string()),
    }
}

/// Dense JSON form with one `[b]` row per line.
pub fn to_json(t: &BehaviorTable) -> String {
    let s = t.shape();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{{\n  \"n_x\": {},\n  \"n_y\": {},\n  \"n_a\": {},\n  \"n_b\": {},\n  \"entries\": [",
        s.n_x, s.n_y, s.n_a, s.n_b
    );
    for x in 0..s.n_x {
        out.push_str("    [\n");
        for y in 0..s.n_y {
            out.push_str("      [\n");
            for a in 0..s.n_a {
                let row: Vec<String> = (0..s.n_b)
                    .map(|b| {
                        t.get(Index { x, y, a, b })
                            .map(prob_to_json)
                            .unwrap_or_else(|| "null".to_string())
                    })
                    .collect();
                let sep = if a + 1 < s.n_a { "," } else { "" };
                let _ = writeln!(out, "        [{}]{sep}", row.join(", "));
            }
            let sep = if y + 1 < s.n_y { "," } else { "" };
            let _ = writeln!(out, "      ]{sep}");
        }
        let sep = if x + 1 < s.n_x { "," } else { "" };
        let _ = writeln!(out, "    ]{sep}");
    }
    out.push_str("  ]\n}\n");
    out
}
