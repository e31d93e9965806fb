//! Report documents and their text rendering.

use std::fmt::Write;

use mlti_core::Tolerance;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::Format;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportFile {
    pub command: Value,
    pub tolerances: Value,
    pub results: Value,
    pub timing: Value,
}

impl ReportFile {
    pub fn new(command: Value, tol: &Tolerance, results: Value, elapsed_seconds: f64) -> Self {
        ReportFile {
            command,
            tolerances: tolerance_echo(tol),
            results,
            timing: json!({ "elapsed_seconds": elapsed_seconds }),
        }
    }
}

pub fn tolerance_echo(tol: &Tolerance) -> Value {
    json!({
        "rank": tol.rank,
        "positive_definite": tol.pd,
        "inverse": tol.inverse,
        "stability": tol.stability,
        "cluster": tol.cluster,
    })
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => crate::format::to_canonical(value),
        Format::Text => {
            let mut out = String::new();
            text(&mut out, value, 0);
            out
        }
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object() && (!x.is_array() || is_flat(x))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => object(out, map, depth),
        Value::Array(items) if !is_flat(v) => {
            for (k, item) in items.iter().enumerate() {
                let _ = writeln!(out, "{pad}[{k}]");
                text(out, item, depth + 1);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other));
        }
    }
}

fn object(out: &mut String, map: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (key, v) in map {
        if is_flat(v) {
            let _ = writeln!(out, "{pad}{key}: {}", inline(v));
        } else {
            let _ = writeln!(out, "{pad}{key}:");
            text(out, v, depth + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_nests() {
        let v = json!({
            "results": { "class": "stable", "eigenvalues": [[1.0, 0.0], [0.5, -0.5]] },
            "items": [{ "a": 1 }],
        });
        let s = render(&v, Format::Text);
        assert!(s.contains("results:\n  class: stable\n  eigenvalues: [[1.0, 0.0], [0.5, -0.5]]\n"), "{s}");
        assert!(s.contains("items:\n  [0]\n    a: 1\n"), "{s}");
    }

    #[test]
    fn json_rendering_ends_with_newline() {
        assert_eq!(render(&json!({"a": 1}), Format::Json), "{\n  \"a\": 1\n}\n");
    }
}
