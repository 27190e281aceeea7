use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use spherangle::io::fmt12;
use spherangle::MeasureEstimate;

/// How a row's value is judged against its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    /// `|value - reference| <= threshold`
    #[serde(rename = "within")]
    Within,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub threshold: f64,
    pub comparison: Comparison,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub subject: String,
    pub quantity: String,
    pub value: f64,
    pub stderr: f64,
    pub method: String,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub natural: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", flatten)]
    pub check: Option<Check>,
}

/// Rounds to the 12 significant digits shown to users.
pub fn r12(x: f64) -> f64 {
    fmt12(x).parse().unwrap_or(x)
}

impl Row {
    pub fn new(subject: impl Into<String>, quantity: impl Into<String>, value: f64, method: &str) -> Self {
        Row {
            subject: subject.into(),
            quantity: quantity.into(),
            value: r12(value),
            stderr: 0.0,
            method: method.to_string(),
            samples: 0,
            seed: None,
            natural: None,
            count: None,
            check: None,
        }
    }

    pub fn estimate(subject: impl Into<String>, quantity: impl Into<String>, e: &MeasureEstimate) -> Self {
        let mut row = Row::new(subject, quantity, e.normalized, e.method.name());
        row.stderr = r12(e.stderr);
        row.samples = e.samples;
        row.seed = e.seed;
        row
    }

    pub fn stderr(mut self, s: f64) -> Self {
        self.stderr = r12(s);
        self
    }

    pub fn sampled(mut self, samples: u64, seed: u64) -> Self {
        self.samples = samples;
        self.seed = Some(seed);
        self
    }

    pub fn natural(mut self, x: f64) -> Self {
        self.natural = Some(r12(x));
        self
    }

    pub fn count(mut self, n: usize) -> Self {
        self.count = Some(n);
        self
    }

    /// Attaches a threshold; the verdict uses the unrounded value.
    pub fn judged(mut self, raw: f64, comparison: Comparison, threshold: f64, reference: Option<f64>) -> Self {
        let pass = match comparison {
            Comparison::AtMost => raw <= threshold,
            Comparison::AtLeast => raw >= threshold,
            Comparison::Within => (raw - reference.unwrap_or(0.0)).abs() <= threshold,
        };
        self.check = Some(Check { threshold: r12(threshold), comparison, reference: reference.map(r12), pass });
        self
    }

    pub fn failed(&self) -> bool {
        self.check.as_ref().is_some_and(|c| !c.pass)
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: u64,
    pub samples: u64,
    pub threads: usize,
    pub timestamp: u64,
    pub passed: bool,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64, samples: u64) -> Self {
        Report {
            tool: "spherangle",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            arguments: std::env::args().skip(1).collect(),
            seed,
            samples,
            threads: rayon::current_num_threads(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            passed: true,
            rows: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        if row.failed() {
            self.passed = false;
        }
        self.rows.push(row);
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        if let Ok(v) = serde_json::to_value(value) {
            self.details.insert(key.to_string(), v);
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("subject,quantity,value,stderr,method,samples,seed,natural,threshold,comparison,pass\n");
        for r in &self.rows {
            let opt = |x: Option<f64>| x.map(fmt12).unwrap_or_default();
            let (threshold, comparison, pass) = match &r.check {
                Some(c) => (fmt12(c.threshold), comparison_name(c.comparison), c.pass.to_string()),
                None => (String::new(), "", String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.subject,
                r.quantity,
                fmt12(r.value),
                fmt12(r.stderr),
                r.method,
                r.samples,
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                opt(r.natural),
                threshold,
                comparison,
                pass
            ));
        }
        out
    }

    /// The fixed reference-table layout.
    pub fn to_table_csv(&self) -> String {
        let mut out = String::from("solid,quantity,value_normalized,value_natural_units,stderr,method\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.subject,
                r.quantity,
                fmt12(r.value),
                r.natural.map(fmt12).unwrap_or_default(),
                fmt12(r.stderr),
                r.method
            ));
        }
        out
    }
}

fn comparison_name(c: Comparison) -> &'static str {
    match c {
        Comparison::AtMost => "<=",
        Comparison::AtLeast => ">=",
        Comparison::Within => "within",
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
