//! Machine-readable result records and reports.
//!
//! A report serializes as
//! `{"command", "config", "records": [{"check", "params", "lhs", "rhs",
//! "residual", "sigma", "pass"}], "all_pass"}` with records sorted by check
//! name. The schema ships as `docs/report.schema.json` at the workspace root.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Check parameters, kept ordered so serialization is deterministic.
pub type Params = BTreeMap<String, Value>;

fn nullable<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub check: String,
    pub params: Params,
    /// Non-finite values serialize as `null` and read back as NaN.
    #[serde(deserialize_with = "nullable")]
    pub lhs: f64,
    #[serde(deserialize_with = "nullable")]
    pub rhs: f64,
    #[serde(deserialize_with = "nullable")]
    pub residual: f64,
    /// Standard error for statistical checks; `null` for exact ones.
    pub sigma: Option<f64>,
    pub pass: bool,
}

impl Record {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            params: Params::new(),
            lhs: 0.0,
            rhs: 0.0,
            residual: 0.0,
            sigma: None,
            pass: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn sides(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self
    }

    pub fn residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self
    }

    pub fn sigma(mut self, sigma: f64) -> Self {
        self.sigma = Some(sigma);
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub records: Vec<Record>,
    pub all_pass: bool,
}

impl Report {
    /// Sorts records by check name and computes `all_pass`.
    pub fn new(command: impl Into<String>, config: Value, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.check.cmp(&b.check));
        let all_pass = records.iter().all(|r| r.pass);
        Self {
            command: command.into(),
            config,
            records,
            all_pass,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Decode(e.to_string()))
    }

    /// One row per record; `params` is embedded as a JSON string.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["check", "params", "lhs", "rhs", "residual", "sigma", "pass"])
            .expect("in-memory write");
        for r in &self.records {
            let params = serde_json::to_string(&r.params).expect("params serialize");
            let sigma = r.sigma.map(number).unwrap_or_default();
            w.write_record([
                r.check.as_str(),
                &params,
                &number(r.lhs),
                &number(r.rhs),
                &number(r.residual),
                &sigma,
                &r.pass.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Shortest round-trip decimal form, matching the JSON output.
pub fn number(x: f64) -> String {
    serde_json::to_string(&x).expect("float serializes")
}

/// Writes rows with a header as LF-terminated CSV.
pub fn csv_table<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|c| c.as_ref()))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
