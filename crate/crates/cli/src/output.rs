use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

/// One CSV cell.
pub enum Cell {
    F(f64),
    U(u64),
    S(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::U(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::U(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every double
            Cell::F(x) => format!("{x:.16e}"),
            Cell::U(x) => x.to_string(),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => json!(x),
            Cell::U(x) => json!(x),
            Cell::S(s) => json!(s),
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, config: &Value) -> String {
        let mut out = String::new();
        writeln!(out, "# config: {config}").unwrap();
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj = self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Command output: an optional table plus a JSON summary.
pub struct Report {
    pub name: &'static str,
    pub table: Option<Table>,
    pub summary: Value,
}

impl Report {
    pub fn new<S: Serialize>(name: &'static str, table: Option<Table>, summary: S) -> Self {
        Report { name, table, summary: serde_json::to_value(summary).expect("summary serializes") }
    }
}

fn summary_doc(cfg: &Value, summary: &Value) -> String {
    let doc = json!({ "config": cfg, "summary": summary });
    serde_json::to_string_pretty(&doc).expect("json") + "\n"
}

/// Writes `<name>.csv|json` and `<name>_summary.json` under `cfg.out`, or
/// the primary document to stdout when no directory is given.
pub fn emit(report: &Report, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let cfg_json = cfg.to_json();
    let mut files: Vec<(String, String)> = Vec::new();
    match (&report.table, cfg.format) {
        (Some(t), Format::Csv) => files.push((format!("{}.csv", report.name), t.to_csv(&cfg_json))),
        (Some(t), Format::Json) => {
            let doc = json!({ "config": cfg_json, "rows": t.to_json() });
            files.push((format!("{}.json", report.name), serde_json::to_string_pretty(&doc).expect("json") + "\n"));
        }
        (None, _) => {}
    }
    files.push((format!("{}_summary.json", report.name), summary_doc(&cfg_json, &report.summary)));

    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            let mut written = Vec::new();
            for (name, body) in files {
                let p = dir.join(name);
                std::fs::write(&p, body).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                written.push(p);
            }
            Ok(written)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let body = &files[0].1;
            lock.write_all(body.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            if files.len() > 1 {
                eprint!("{}", files[1].1);
            }
            Ok(Vec::new())
        }
    }
}
