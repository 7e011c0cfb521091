//! Certification report: per-claim entries, metadata, JSON and CSV output.
//!
//! Everything that varies between identical runs (timestamp, wall-clock
//! timings, worker count) lives under `metadata.run_info`, so the rest of
//! the JSON document is byte-for-byte reproducible from config and seed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimVerdict {
    Pass,
    Fail,
    /// A fitted growth model met its threshold.
    EvidenceWithFit,
}

impl ClaimVerdict {
    pub fn is_success(self) -> bool {
        !matches!(self, ClaimVerdict::Fail)
    }

    pub fn label(self) -> &'static str {
        match self {
            ClaimVerdict::Pass => "pass",
            ClaimVerdict::Fail => "fail",
            ClaimVerdict::EvidenceWithFit => "evidence-with-fit",
        }
    }
}

/// A plot-ready numeric table written as CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimEntry {
    pub id: String,
    pub suite: String,
    pub inputs: Value,
    pub verdict: ClaimVerdict,
    pub witness: Value,
    /// Set when the claim could not be evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// CSV extracts written next to the report.
    pub tables: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub unix_time: u64,
    pub workers: usize,
    /// Wall time per claim in milliseconds.
    pub runtime_ms: BTreeMap<String, u64>,
    pub total_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub suite: String,
    pub seed: u64,
    /// SHA-256 of the canonical TOML configuration, execution settings excluded.
    pub config_hash: String,
    pub weights: String,
    pub coupling: String,
    pub indexing_note: String,
    pub run_info: RunInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub metadata: Metadata,
    /// Sorted by claim id; each executed claim appears once.
    pub claims: Vec<ClaimEntry>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

/// Note on weight indexing embedded in every report.
pub const INDEXING_NOTE: &str = "Interleaved weights: rho_j = 1 for j <= 1, rho_{2j} = a_j and rho_{2j+1} = 1/a_j for j >= 1, \
with a_j = j/(j+1) (or the pi-dominated deficit). The shift acts as T e_j = rho_{j-1} e_{j-1}; the similarity \
W has w_{2j+1} = 1/a_j for j >= 1 and w_j = 1 otherwise, so that W^{-1} T W is the unweighted shift.";

impl CertificationReport {
    pub fn success(&self) -> bool {
        self.claims.iter().all(|c| c.verdict.is_success())
    }

    pub fn has_internal_error(&self) -> bool {
        self.claims.iter().any(|c| c.error.is_some())
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimEntry> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON document with `metadata.run_info` removed, for comparing runs.
    pub fn reproducible_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(meta) = v.get_mut("metadata").and_then(Value::as_object_mut) {
            meta.remove("run_info");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write the JSON report and, when `csv` is set, every table. Returns the
/// paths written.
pub fn emit_report(report: &CertificationReport, dir: &Path, json_name: &str, csv: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    let json_path = dir.join(json_name);
    std::fs::write(&json_path, report.to_json() + "\n").map_err(|e| io_err(&json_path, e))?;
    written.push(json_path);
    if csv {
        for table in &report.tables {
            let path = dir.join(table.file_name());
            write_table(table, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn write_table(table: &Table, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(path, source),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    })?;
    let to_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(path, source),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    };
    w.write_record(&table.columns).map_err(to_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|x| format!("{x:e}"))).map_err(to_err)?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skeleton() -> CertificationReport {
        CertificationReport {
            metadata: Metadata {
                tool: "shiftlab".into(),
                version: "0".into(),
                suite: "all".into(),
                seed: 1,
                config_hash: "00".into(),
                weights: "theorem1".into(),
                coupling: "harmonic".into(),
                indexing_note: INDEXING_NOTE.into(),
                run_info: RunInfo {
                    unix_time: 5,
                    workers: 2,
                    runtime_ms: BTreeMap::new(),
                    total_ms: 0,
                },
            },
            claims: Vec::new(),
            tables: Vec::new(),
        }
    }

    #[test]
    fn empty_report_is_valid_json_skeleton() {
        let r = skeleton();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["claims"], Value::Array(vec![]));
        assert!(v["metadata"]["config_hash"].is_string());
        assert!(r.success());
    }

    #[test]
    fn reproducible_form_drops_run_info() {
        let a = skeleton();
        let mut b = skeleton();
        b.metadata.run_info.unix_time = 99;
        b.metadata.run_info.runtime_ms.insert("x".into(), 3);
        assert_ne!(a.to_json(), b.to_json());
        assert_eq!(a.reproducible_json(), b.reproducible_json());
    }

    #[test]
    fn emits_json_and_csv() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = skeleton();
        let mut t = Table::new("growth", &["x", "y"]);
        t.push(vec![1.0, 2.5]);
        r.tables.push(t);
        let files = emit_report(&r, dir.path(), "report.json", true).unwrap();
        assert_eq!(files.len(), 2);
        let csv = std::fs::read_to_string(dir.path().join("growth.csv")).unwrap();
        assert_eq!(csv, "x,y\n1e0,2.5e0\n");
    }
}
