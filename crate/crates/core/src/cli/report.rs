//! Tabular reports rendered as CSV or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::config::{ExperimentConfig, Format};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// 17 significant digits.
pub fn format_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(format_num(*x)),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Number of embedded certificates and how many failed.
    pub certificates: usize,
    pub failures: usize,
    pub verdict: String,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Report {
            columns,
            rows: Vec::new(),
            certificates: 0,
            failures: 0,
            verdict: String::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Records a certificate outcome and returns the status cell for its row.
    pub fn certify(&mut self, passed: bool) -> Cell {
        self.certificates += 1;
        if !passed {
            self.failures += 1;
        }
        Cell::from(if passed { "pass" } else { "fail" })
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn finish(&mut self, summary: &str) {
        self.verdict = if self.passed() {
            format!("{summary}; {} certificates passed", self.certificates)
        } else {
            format!(
                "{summary}; {} of {} certificates failed",
                self.failures, self.certificates
            )
        };
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        let _ = writeln!(out, "# verdict: {}", self.verdict);
        out
    }

    pub fn to_json(&self, cfg: &ExperimentConfig) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert((*c).to_string(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let config: BTreeMap<String, String> = cfg.echo();
        let doc = json!({
            "metadata": {
                "artifact_version": ARTIFACT_VERSION,
                "seed": cfg.seed,
                "config": config,
            },
            "columns": self.columns,
            "records": records,
            "certificates": self.certificates,
            "failures": self.failures,
            "passed": self.passed(),
            "verdict": self.verdict,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, cfg: &ExperimentConfig) -> String {
        match cfg.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(cfg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(format_num(0.1), "1.0000000000000001e-1");
        assert_eq!(format_num(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new(vec!["t", "value", "status"]);
        let s = r.certify(true);
        r.push(vec![1.0.into(), 2.5.into(), s]);
        r.push(vec![2.0.into(), Cell::from("a,b"), Cell::from("info")]);
        r.finish("done");
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,value,status");
        assert_eq!(lines[2], "2.0000000000000000e0,\"a,b\",info");
        assert!(csv.ends_with("passed\n"));
        assert!(r.passed());
    }
}
