//! Flat JSON records in which every number carries its own accuracy.
//!
//! For a numeric key `k` the record also holds either `k_exact: true` or
//! `k_error_bound: e` (an absolute bound). Integers of magnitude `2^53` or
//! more are written as decimal strings, and quantities kept in log form as
//! `{"log_value": x}` with the error bound applying to `x`.

use rug::{Float, Integer};
use serde_json::{Map, Value};

const SAFE_INT: u64 = 1 << 53;

#[derive(Clone, Debug, Default)]
pub struct Record(Map<String, Value>);

/// Error of an `f64` that was rounded once from an exact or enclosed value.
pub fn ulp(v: f64) -> f64 {
    if v == 0.0 {
        f64::MIN_POSITIVE
    } else {
        v.abs() * f64::EPSILON
    }
}

impl Record {
    pub fn new() -> Self {
        Record(Map::new())
    }

    pub fn int(&mut self, key: &str, v: impl Into<Integer>) -> &mut Self {
        let v: Integer = v.into();
        let value = if v.clone().abs() < SAFE_INT {
            Value::from(v.to_i64().expect("fits"))
        } else {
            Value::from(v.to_string())
        };
        self.0.insert(key.into(), value);
        self.0.insert(format!("{key}_exact"), Value::Bool(true));
        self
    }

    pub fn real(&mut self, key: &str, v: f64, error_bound: f64) -> &mut Self {
        self.0.insert(key.into(), number(v));
        self.0.insert(format!("{key}_error_bound"), number(error_bound));
        self
    }

    /// A number that is itself an error bound.
    pub fn bound(&mut self, key: &str, v: f64) -> &mut Self {
        self.0.insert(key.into(), number(v));
        self
    }

    /// A high-precision value as a decimal string.
    pub fn big(&mut self, key: &str, v: &Float, error_bound: f64) -> &mut Self {
        let digits = (v.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        self.0.insert(key.into(), Value::from(v.to_string_radix(10, Some(digits))));
        self.0.insert(format!("{key}_error_bound"), number(error_bound));
        self
    }

    pub fn log(&mut self, key: &str, log_value: f64, error_bound: f64) -> &mut Self {
        let mut inner = Map::new();
        inner.insert("log_value".into(), number(log_value));
        self.0.insert(key.into(), Value::Object(inner));
        self.0.insert(format!("{key}_error_bound"), number(error_bound));
        self
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        self.0.insert(key.into(), Value::Bool(v));
        self
    }

    pub fn text(&mut self, key: &str, v: impl Into<String>) -> &mut Self {
        self.0.insert(key.into(), Value::String(v.into()));
        self
    }

    pub fn list(&mut self, key: &str, items: Vec<Record>) -> &mut Self {
        self.0.insert(key.into(), Value::Array(items.into_iter().map(Record::into_value).collect()));
        self
    }

    pub fn strings(&mut self, key: &str, items: &[String]) -> &mut Self {
        self.0.insert(key.into(), Value::Array(items.iter().cloned().map(Value::from).collect()));
        self
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.0).expect("serializable")
    }

    /// `key = value` lines, nested records indented.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_text(&Value::Object(self.0.clone()), 0, &mut out);
        out
    }
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(v.to_string()))
}

fn write_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Array(items) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for (i, item) in items.iter().enumerate() {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            write_text(item, depth + 2, out);
                        }
                    }
                    Value::Object(inner) if inner.len() == 1 && inner.contains_key("log_value") => {
                        out.push_str(&format!("{pad}{k} = exp({})\n", inner["log_value"]));
                    }
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(x, depth + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k} = {}\n", scalar(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
