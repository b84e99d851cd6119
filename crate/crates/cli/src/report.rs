//! Deterministic report emission.
//!
//! Data files are byte-reproducible: fixed field order, floats at 17
//! significant digits, LF line endings, no timestamps. Run metadata
//! (including a timestamp) lives in a separate sidecar file.

use anyhow::{Context, Result};
use serde_json::{Map, Value};
use std::fmt::Write as _;
use std::path::Path;

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Field {
    Float(f64),
    Int(i64),
    Str(String),
    Bool(bool),
    Empty,
}

/// 17 significant digits; non-finite values spelled out.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_owned()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        }
    } else {
        format!("{x:.16e}")
    }
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Float(x) => fmt_float(*x),
            Field::Int(i) => i.to_string(),
            Field::Str(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Empty => String::new(),
        }
    }
}

/// Comma-separated, header row first, LF endings, UTF-8.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Field>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let rendered: Vec<String> = row.iter().map(Field::render).collect();
        let _ = writeln!(out, "{}", rendered.join(","));
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// JSON number or null for non-finite values.
pub fn json_float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Serializes with canonical (sorted) key order and a trailing newline.
pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let canonical = canonicalize(value.clone());
    let mut text = serde_json::to_string_pretty(&canonical)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn canonicalize(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            // serde_json's Map is already BTree-backed (sorted); rebuild to
            // canonicalize nested values regardless.
            let mut sorted: Vec<(String, Value)> = map.into_iter().collect();
            sorted.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in sorted {
                out.insert(k, canonicalize(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        other => other,
    }
}

/// Sidecar with non-reproducible run metadata.
pub fn write_sidecar(path: &Path, config_hash: &str, config_path: &Path) -> Result<()> {
    let meta = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config_path": config_path.display().to_string(),
        "config_hash": config_hash,
        "unix_time_s": std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    });
    write_json(path, &meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_17_significant_digits() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(std::f64::consts::PI), "3.1415926535897931e0");
        assert_eq!(fmt_float(-0.3125), "-3.1250000000000000e-1");
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }

    #[test]
    fn json_is_canonically_ordered() {
        let v = serde_json::json!({"zeta": 1, "alpha": {"y": 2, "x": 3}});
        let c = canonicalize(v);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"alpha":{"x":3,"y":2},"zeta":1}"#);
    }

    #[test]
    fn nan_maps_to_null() {
        assert_eq!(json_float(f64::NAN), Value::Null);
        assert_eq!(json_float(2.0), serde_json::json!(2.0));
    }
}
