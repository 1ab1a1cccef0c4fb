//! Tabular output: CSV with a `#` metadata header or a JSON document, plus
//! the run manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A single table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Twelve significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".to_owned()
    } else if v.is_finite() {
        format!("{v:.11e}")
    } else {
        v.to_string()
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Int(v) => (*v).into(),
            Cell::Text(s) => s.clone().into(),
        }
    }
}

/// Named columns, rows of cells, and `key: value` metadata.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            ..Self::default()
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match header");
        self.rows.push(row);
    }

    /// Numeric column by name, skipping non-numeric cells.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(idx) = self.columns.iter().position(|c| c == name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| match r[idx] {
                Cell::Num(v) => Some(v),
                Cell::Int(v) => Some(v as f64),
                Cell::Text(_) => None,
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let meta: serde_json::Map<String, serde_json::Value> =
            self.meta.iter().map(|(k, v)| (k.clone(), v.clone().into())).collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> =
                    self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "meta": meta, "rows": rows })
    }

    /// Writes `<dir>/<stem>.<ext>` and returns the path.
    pub fn save(&self, dir: &Path, stem: &str, format: Format) -> Result<PathBuf> {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        match format {
            Format::Csv => self.write_csv(&mut out)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out)?;
            }
        }
        out.flush()?;
        Ok(path)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

/// Record of one command invocation, written next to its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: serde_json::Value,
    pub rng_seed: Option<u64>,
    pub rng_algorithm: &'static str,
    pub engine_versions: serde_json::Value,
    pub outputs: Vec<String>,
    pub checks: Vec<Check>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn path(dir: &Path, subcommand: &str) -> PathBuf {
        dir.join(format!("{subcommand}.manifest.json"))
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        let path = Self::path(dir, &self.subcommand);
        let text = serde_json::to_string_pretty(self)?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

pub fn engine_versions() -> serde_json::Value {
    serde_json::json!({
        "gralab": env!("CARGO_PKG_VERSION"),
        "gralab-core": gralab_core::VERSION,
    })
}

/// A named pass/fail check with a human-readable detail line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        }
    }
}
