use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// One compared quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Gap {
    pub label: String,
    pub gap: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Gap {
    pub fn new(label: impl Into<String>, gap: f64, tol: f64) -> Self {
        Self {
            label: label.into(),
            gap,
            tol,
            pass: gap <= tol,
        }
    }

    /// A quantity that must reach `floor` (rates, negative controls).
    pub fn at_least(label: impl Into<String>, value: f64, floor: f64) -> Self {
        Self {
            label: label.into(),
            gap: value,
            tol: floor,
            pass: value >= floor,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    /// The formula the run implements, by name.
    pub formula: String,
    pub seed: u64,
    pub inputs: Value,
    pub results: Value,
    pub gaps: Vec<Gap>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, formula: &str, seed: u64, inputs: Value) -> Self {
        Self {
            command: command.into(),
            formula: formula.into(),
            seed,
            inputs,
            results: Value::Null,
            gaps: Vec::new(),
            warnings: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, gap: Gap) {
        self.pass &= gap.pass;
        self.gaps.push(gap);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Output directory: the flag, then the environment, then `.`.
pub fn output_path(dir: Option<&Path>, name: &str) -> PathBuf {
    dir.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".")).join(name)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::File::create(path)?.write_all(bytes)
}

/// CSV with a header row from rows of floats.
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r.iter().map(|v| format!("{v:e}"))).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
