use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    /// Floats carry 17 significant digits so they round-trip exactly.
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(x.to_string()),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a subcommand produced.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
    /// Extra binary files (name, bytes).
    pub blobs: Vec<(String, Vec<u8>)>,
    /// Numbers worth echoing in the manifest.
    pub facts: Map<String, Value>,
}

/// `a;b;c` for tuples inside a CSV cell.
pub fn tuple(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
}

fn io(context: String) -> impl FnOnce(std::io::Error) -> CliError {
    move |source| CliError::Io { context, source }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<String, CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(io(format!("writing {}", path.display())))?;
    Ok(hex(&Sha256::digest(bytes)))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn csv_bytes(table: &Table) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv))?;
    }
    w.into_inner()
        .map_err(|e| CliError::Io {
            context: "flushing csv".into(),
            source: e.into_error(),
        })
}

fn table_json(table: &Table) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .header
                .iter()
                .zip(row)
                .map(|(h, c)| (h.to_string(), c.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    Value::Array(rows)
}

/// Identifier of the resolved configuration.
pub fn run_id(config: &RunConfig) -> Result<String, CliError> {
    let bytes = serde_json::to_vec(config)?;
    Ok(hex(&Sha256::digest(&bytes))[..16].to_string())
}

/// Writes tables, blobs, the summary and `manifest.json` into `config.out`.
pub fn write_all(config: &RunConfig, artifacts: &Artifacts) -> Result<(), CliError> {
    let dir = &config.out;
    fs::create_dir_all(dir).map_err(io(format!("creating {}", dir.display())))?;
    let mut files = Map::new();
    match config.format {
        Format::Csv => {
            for t in &artifacts.tables {
                let name = format!("{}.csv", t.name);
                let digest = write_file(dir, &name, &csv_bytes(t)?)?;
                files.insert(name, json!(digest));
            }
        }
        Format::Json => {
            let report: Map<String, Value> = artifacts
                .tables
                .iter()
                .map(|t| (t.name.to_string(), table_json(t)))
                .collect();
            let bytes = serde_json::to_vec_pretty(&Value::Object(report))?;
            files.insert("report.json".into(), json!(write_file(dir, "report.json", &bytes)?));
        }
    }
    for (name, bytes) in &artifacts.blobs {
        files.insert(name.clone(), json!(write_file(dir, name, bytes)?));
    }
    let mut summary = artifacts.summary.join("\n");
    summary.push('\n');
    files.insert("summary.txt".into(), json!(write_file(dir, "summary.txt", summary.as_bytes())?));

    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "run_id": run_id(config)?,
        "config": config,
        "conventions": {
            "mean_law": "mean(u)(t) = mean(u0) + t * mean(u1)",
            "drift": "(a0 + a1 t) P w with a0 = 2 mean(u0), a1 = 2 mean(u1) = (1/pi) * integral of u1",
            "a0": 2.0 * config.mean0,
            "a1": 2.0 * config.mean1,
            "beta": "gamma - alpha",
            "csv_floats": "17 significant digits",
        },
        "results": artifacts.facts,
        "files": files,
    });
    let bytes = serde_json::to_vec_pretty(&manifest)?;
    write_file(dir, "manifest.json", &bytes)?;
    Ok(())
}
