//! Output documents and their text rendering.

use std::fmt::Write as _;

use lovelock_core::fg_expansion::ResidualOrder;
use lovelock_core::indicial::{RootPair, Surd};
use lovelock_core::ScalarJet;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub status: &'static str,
    pub command: String,
    pub tables: Map<String, Value>,
    pub residual_orders: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report { status: "ok", command: command.into(), tables: Map::new(), residual_orders: Map::new(), warnings: Vec::new() }
    }

    pub fn table(&mut self, key: &str, v: Value) {
        self.tables.insert(key.into(), v);
    }

    pub fn residual(&mut self, key: &str, o: ResidualOrder) {
        self.residual_orders.insert(key.into(), Value::String(o.to_string()));
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

pub fn error_value(e: &CliError) -> Value {
    json!({ "status": "error", "error": e })
}

/// `{"cap", "terms": [{"exps", "coeff"}]}`, plus `known_below` for a
/// truncated jet.
pub fn jet(s: &ScalarJet) -> Value {
    let terms: Vec<Value> = s.terms().into_iter().map(|(e, c)| json!({ "exps": e, "coeff": c })).collect();
    let mut m = Map::new();
    m.insert("cap".into(), json!(s.cap()));
    m.insert("terms".into(), Value::Array(terms));
    if !s.is_exact() {
        m.insert("known_below".into(), json!(s.prec()));
    }
    Value::Object(m)
}

pub fn matrix(a: &[Vec<ScalarJet>]) -> Value {
    Value::Array(a.iter().map(|r| Value::Array(r.iter().map(jet).collect())).collect())
}

pub fn root_pair(p: &RootPair) -> Value {
    let mut v = serde_json::to_value(p).expect("roots serialize");
    v["display"] = Value::String(p.to_string());
    v
}

pub fn surd(s: &Surd) -> Value {
    let mut v = serde_json::to_value(s).expect("surds serialize");
    v["display"] = Value::String(s.to_string());
    v
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            text(v, "", &mut out);
            out
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn is_jet(m: &Map<String, Value>) -> bool {
    m.contains_key("terms") && m.contains_key("cap")
}

fn jet_text(m: &Map<String, Value>) -> String {
    let terms = m["terms"].as_array().cloned().unwrap_or_default();
    let mut s = String::new();
    for t in &terms {
        let c = t["coeff"].as_str().unwrap_or("?");
        let exps: Vec<u64> = t["exps"].as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default();
        let mono: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("z{i}") } else { format!("z{i}^{e}") })
            .collect();
        if !s.is_empty() {
            s.push_str(" + ");
        }
        match (mono.is_empty(), c) {
            (true, _) => s.push_str(c),
            (false, "1") => s.push_str(&mono.join(" ")),
            (false, _) => write!(s, "({c}) {}", mono.join(" ")).unwrap(),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    if let Some(k) = m.get("known_below") {
        write!(s, " + O(deg {k})").unwrap();
    }
    s
}

fn text(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(m) if is_jet(m) => writeln!(out, "{path} = {}", jet_text(m)).unwrap(),
        Value::Object(m) if m.contains_key("display") => writeln!(out, "{path} = {}", m["display"].as_str().unwrap_or("")).unwrap(),
        Value::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                text(x, &p, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            writeln!(out, "{path} = [{}]", items.join(", ")).unwrap();
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                text(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => writeln!(out, "{path} = {}", scalar_text(v)).unwrap(),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
