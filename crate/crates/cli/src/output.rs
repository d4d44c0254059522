//! Tables with fixed float formatting, written atomically as CSV or JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::error::CliError;

/// Declared branch of every reported phase.
pub const PHASE_BRANCH: &str = "(-pi,pi]";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn to_text(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(format_float(*x)),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
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

/// Seventeen significant digits, which round-trips every f64.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        // Keeps -0.0 and 0.0 textually identical.
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

/// A named result table plus ordered metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header of {}", self.name);
        self.rows.push(row);
    }

    /// Metadata as `# key=value` lines, then a header row and data rows, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# phase_branch={PHASE_BRANCH}\n");
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={}\n", v.to_text()));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_text).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), v.to_json());
        }
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::to_json).collect())).collect();
        let doc = json!({
            "phase_branch": PHASE_BRANCH,
            "meta": Value::Object(meta),
            "columns": self.columns,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
        text.push('\n');
        text
    }

    /// Write `<dir>/<name>.<ext>` via a temporary file and rename.
    pub fn write(&self, dir: &Path, format: Format) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir)?;
        let (ext, body) = match format {
            Format::Csv => ("csv", self.to_csv()),
            Format::Json => ("json", self.to_json()),
        };
        let path = dir.join(format!("{}.{ext}", self.name));
        let tmp = dir.join(format!(".{}.{ext}.tmp", self.name));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
