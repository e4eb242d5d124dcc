//! JSON-lines and CSV rendering.
//!
//! JSON objects use `serde_json`'s default ordered map, so keys come out
//! sorted. Non-finite floats are written as the strings `"inf"`, `"-inf"`
//! and `"NaN"`.

use gabor_fock::series::{Param, Value, VerificationReport};
use num_complex::Complex64 as C64;
use serde_json::{json, Map, Value as Json};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn number(x: f64) -> Json {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("NaN")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn complex(z: C64) -> Json {
    json!({ "re": number(z.re), "im": number(z.im) })
}

fn value(v: &Value) -> Json {
    match v {
        Value::Real(x) => number(*x),
        Value::Complex(z) => complex(*z),
    }
}

fn param(p: &Param) -> Json {
    match p {
        Param::Int(i) => json!(i),
        Param::Real(x) => number(*x),
        Param::Complex(z) => complex(*z),
        Param::Text(s) => json!(s),
    }
}

pub fn report_json(r: &VerificationReport, config: &Json) -> Json {
    let params: Map<String, Json> = r.params.iter().map(|(k, v)| (k.clone(), param(v))).collect();
    let measurements: Map<String, Json> = r.measurements.iter().map(|(k, v)| (k.clone(), number(*v))).collect();
    json!({
        "op": r.op,
        "params": params,
        "value": value(&r.value),
        "reference": r.reference.as_ref().map(value),
        "error_bound": number(r.error_bound),
        "truncation_radius": r.truncation_radius.map(number),
        "pass": r.pass,
        "measurements": measurements,
        "config": config,
    })
}

fn cell(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn split(v: Option<&Value>) -> (String, String) {
    match v {
        Some(Value::Real(x)) => (cell(*x), String::new()),
        Some(Value::Complex(z)) => (cell(z.re), cell(z.im)),
        None => (String::new(), String::new()),
    }
}

/// Records in output order, with a CSV row for each.
pub struct Table {
    header: Vec<String>,
    records: Vec<Json>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            records: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Layout for verification reports.
    pub fn reports() -> Self {
        Table::new(&[
            "op",
            "params",
            "value_re",
            "value_im",
            "reference_re",
            "reference_im",
            "error_bound",
            "truncation_radius",
            "pass",
        ])
    }

    pub fn push(&mut self, record: Json, cells: Vec<f64>) {
        self.records.push(record);
        self.rows.push(cells.into_iter().map(cell).collect());
    }

    pub fn push_report(&mut self, record: Json, r: &VerificationReport) {
        let params: Vec<String> = r
            .params
            .iter()
            .map(|(k, v)| match v {
                Param::Int(i) => format!("{k}={i}"),
                Param::Real(x) => format!("{k}={x}"),
                Param::Complex(z) => format!("{k}={}{:+}i", z.re, z.im),
                Param::Text(s) => format!("{k}={s}"),
            })
            .collect();
        let (v_re, v_im) = split(Some(&r.value));
        let (r_re, r_im) = split(r.reference.as_ref());
        self.records.push(record);
        self.rows.push(vec![
            quote(&r.op),
            quote(&params.join(";")),
            v_re,
            v_im,
            r_re,
            r_im,
            cell(r.error_bound),
            r.truncation_radius.map(cell).unwrap_or_default(),
            r.pass.to_string(),
        ]);
    }

    /// A JSON-only record; CSV output carries the table rows alone.
    pub fn push_summary(&mut self, record: Json) {
        self.records.push(record);
        self.rows.push(Vec::new());
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Json => {
                for r in &self.records {
                    out.push_str(&r.to_string());
                    out.push('\n');
                }
            }
            Format::Csv => {
                out.push_str(&self.header.join(","));
                out.push('\n');
                for row in self.rows.iter().filter(|r| !r.is_empty()) {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
        }
        out
    }
}
