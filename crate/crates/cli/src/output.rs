//! Deterministic JSON and CSV writers.

use std::io::Write;
use std::path::Path;

use mps2_core::scan::SpectralRecord;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Shortest round-trip decimal (at most 17 significant digits), with
/// exponent notation outside [1e-5, 1e16).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Number, or the strings "inf"/"-inf"/"nan" (JSON has no non-finite numbers).
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(fmt_f64(x))
    }
}

/// JSON with sorted keys (serde_json maps are ordered). Objects are indented;
/// arrays that hold no objects (vectors, matrices) stay on one line.
pub fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let value = serde_json::to_value(v).map_err(|e| CliError::numerical(format!("serialization: {e}")))?;
    let mut s = String::new();
    write_value(&value, 0, &mut s);
    s.push('\n');
    Ok(s)
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(has_object),
        _ => false,
    }
}

fn write_value(v: &Value, depth: usize, s: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(map) if !map.is_empty() => {
            s.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                s.push_str(&pad(depth + 1));
                s.push_str(&Value::from(k.as_str()).to_string());
                s.push_str(": ");
                write_value(item, depth + 1, s);
                s.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            s.push_str(&pad(depth));
            s.push('}');
        }
        Value::Array(items) if has_object(v) => {
            s.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                s.push_str(&pad(depth + 1));
                write_value(item, depth + 1, s);
                s.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            s.push_str(&pad(depth));
            s.push(']');
        }
        // -0.0 from conjugation carries no information.
        Value::Number(n) if n.as_f64() == Some(0.0) && n.is_f64() => s.push_str("0.0"),
        other => s.push_str(&other.to_string()),
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::io(e.to_string())),
    }
}

pub fn scan_csv(records: &[SpectralRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["param1".to_string(), "param2".to_string()];
    for i in 0..4 {
        header.push(format!("re_lambda{i}"));
        header.push(format!("im_lambda{i}"));
    }
    header.extend(["xi".to_string(), "degenerate".to_string()]);
    let err = |e: csv::Error| CliError::io(e.to_string());
    w.write_record(&header).map_err(err)?;
    for r in records {
        let mut row = vec![fmt_f64(r.param1), r.param2.map(fmt_f64).unwrap_or_default()];
        for z in &r.eigenvalues {
            row.push(fmt_f64(z.re));
            row.push(fmt_f64(z.im));
        }
        row.push(fmt_f64(r.xi));
        row.push(if r.degenerate { "1" } else { "0" }.into());
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::io(e.to_string()))
}

pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::io(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r.iter().map(|x| fmt_f64(*x))).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::io(e.to_string()))
}
