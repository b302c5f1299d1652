//! Report document and its two renderings.
//!
//! Floats are emitted as strings with 17 significant digits (`%.17g`
//! style) so JSON consumers never see a lossy or non-finite number. Infinity
//! is the token `inf`; exact rationals are `p/q` strings.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use pathmetric::oracle::ExactWeight;
use pathmetric::ExtendedWeight;

/// `printf("%.17g")`.
pub fn g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (16 - exp) as usize, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn num(v: f64) -> Value {
    Value::String(g17(v))
}

pub fn weight(w: ExtendedWeight) -> Value {
    num(w.value())
}

pub fn exact(w: &ExactWeight) -> Value {
    Value::String(w.to_fraction_string())
}

pub fn digest(canonical: &str) -> String {
    let hash = Sha256::digest(canonical.as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub results: Map<String, Value>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input_digest: String) -> Self {
        Self {
            command: command.into(),
            input_digest,
            results: Map::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    pub fn note(&mut self, message: impl Into<String>) {
        self.diagnostics.push(message.into());
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "results": self.results,
            "diagnostics": self.diagnostics,
        });
        serde_json::to_string_pretty(&doc).expect("values are plain JSON")
    }

    pub fn to_human(&self) -> String {
        let mut out = format!("{} ({})\n", self.command, self.input_digest);
        for (key, value) in &self.results {
            render(&mut out, key, value, 1);
        }
        for d in &self.diagnostics {
            out.push_str(&format!("note: {d}\n"));
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        _ => None,
    }
}

fn render(out: &mut String, key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(value) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    match value {
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
            let cells: Vec<String> = items.iter().filter_map(scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", cells.join(", ")));
        }
        Value::Array(items) if items.iter().all(|i| matches!(i, Value::Array(r) if r.iter().all(|c| scalar(c).is_some()))) => {
            out.push_str(&format!("{pad}{key}:\n"));
            let rows: Vec<Vec<String>> = items
                .iter()
                .map(|r| r.as_array().unwrap().iter().filter_map(scalar).collect())
                .collect();
            let width = rows.iter().flatten().map(String::len).max().unwrap_or(0);
            for row in rows {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                out.push_str(&format!("{pad}  {}\n", cells.join("  ")));
            }
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                render(out, k, v, depth + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(g17(2.0 / 3.0), "0.66666666666666663");
        assert_eq!(g17(1.0), "1");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(2.5), "2.5");
        assert_eq!(g17(1e20), "1e+20");
        assert_eq!(g17(1.5e-7), "1.4999999999999999e-07");
        assert_eq!(g17(123456.0), "123456");
        assert_eq!(g17(f64::INFINITY), "inf");
        assert_eq!(g17(0.0001), "0.0001");
    }

    #[test]
    fn keys_are_sorted() {
        let mut r = Report::new("metric", digest(""));
        r.set("zeta", json!(1));
        r.set("alpha", json!(2));
        let text = r.to_json();
        assert!(text.find("alpha").unwrap() < text.find("zeta").unwrap());
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["results"]["alpha"], json!(2));
    }
}
