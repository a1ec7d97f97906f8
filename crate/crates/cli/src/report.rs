//! Report envelope shared by every subcommand.
//!
//! A run emits exactly one JSON object: the command name, the inputs as
//! resolved after merging flags over the config file, the outputs, any
//! warnings, and the tool version. Arbitrary-precision values are encoded
//! as decimal strings so nothing is rounded on the way out; small
//! machine-width inputs (ranks, dimensions, parameters) stay JSON numbers.
//! Inner objects use `serde_json`'s sorted map, so a report serializes
//! byte-identically across runs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub warnings: Vec<String>,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, inputs: Value, outputs: Value, warnings: Vec<String>) -> Self {
        Report {
            command: command.to_owned(),
            inputs,
            outputs,
            warnings,
            version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Flat `key: value` rendering with two-space indentation, for eyes
    /// rather than pipelines. Same data, same order, as the JSON form.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        // Keep the envelope order of the struct, not the sorted-map order.
        for key in ["command", "inputs", "outputs", "warnings", "version"] {
            render_entry(key, &value[key], 0, &mut out);
        }
        out
    }
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn render_entry(key: &str, v: &Value, depth: usize, out: &mut String) {
    indent(depth, out);
    out.push_str(key);
    out.push(':');
    render_value(v, depth, out);
}

fn render_value(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push('\n');
            for (k, inner) in map {
                render_entry(k, inner, depth + 1, out);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            if items.iter().all(|it| !it.is_object() && !it.is_array()) {
                out.push(' ');
                let parts: Vec<String> = items.iter().map(scalar).collect();
                out.push_str(&parts.join(" "));
                out.push('\n');
            } else {
                out.push('\n');
                for item in items {
                    indent(depth + 1, out);
                    out.push('-');
                    render_value(item, depth + 1, out);
                }
            }
        }
        Value::Object(_) => out.push_str(" {}\n"),
        Value::Array(_) => out.push_str(" []\n"),
        _ => {
            out.push(' ');
            out.push_str(&scalar(v));
            out.push('\n');
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn big(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn big_vec(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}

/// `num/den`, or just the numerator when the denominator is 1.
pub fn rational(x: &BigRational) -> Value {
    if x.denom().is_one() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}
