//! Rectangular result tables and their CSV form.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::document::serialize_config;
use cvfb_core::ScenarioConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub scenario: String,
    /// SHA-256 of the canonical config text.
    pub config_hash: String,
    pub version: &'static str,
    /// Seconds since the Unix epoch; omitted for deterministic output.
    pub timestamp: Option<u64>,
}

impl Provenance {
    pub fn new(scenario: &str, cfg: &ScenarioConfig, deterministic: bool) -> Self {
        let digest = Sha256::digest(serialize_config(cfg).as_bytes());
        Self {
            scenario: scenario.to_string(),
            config_hash: hex::encode(digest),
            version: VERSION,
            timestamp: if deterministic {
                None
            } else {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .ok()
                    .map(|d| d.as_secs())
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    pub provenance: Provenance,
    /// Free-form `#` comment lines written after the provenance block.
    pub notes: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("row {row} has {got} values for {want} columns")]
    Ragged { row: usize, got: usize, want: usize },
    #[error("non-finite value {value} in row {row}, column `{column}`")]
    NonFinite {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl ResultTable {
    pub fn new<S: Into<String>>(
        columns: impl IntoIterator<Item = S>,
        rows: Vec<Vec<f64>>,
        provenance: Provenance,
    ) -> Result<Self, TableError> {
        let columns: Vec<String> = columns.into_iter().map(Into::into).collect();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != columns.len() {
                return Err(TableError::Ragged {
                    row: i,
                    got: r.len(),
                    want: columns.len(),
                });
            }
            if let Some((j, &v)) = r.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(TableError::NonFinite {
                    row: i,
                    column: columns[j].clone(),
                    value: v,
                });
            }
        }
        Ok(Self {
            columns,
            rows,
            provenance,
            notes: Vec::new(),
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Provenance and notes as `#` lines, then the header, then one line per
    /// row with every float at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), TableError> {
        let p = &self.provenance;
        let mut head = format!(
            "# scenario: {}\n# config_sha256: {}\n# version: {}\n",
            p.scenario, p.config_hash, p.version
        );
        if let Some(t) = p.timestamp {
            head.push_str(&format!("# timestamp_unix: {t}\n"));
        }
        for n in &self.notes {
            head.push_str(&format!("# {n}\n"));
        }
        w.write_all(head.as_bytes()).map_err(|e| TableError::Io {
            path: "<output>".into(),
            source: e,
        })?;
        let mut csv = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        csv.write_record(&self.columns)?;
        for r in &self.rows {
            csv.write_record(r.iter().map(|v| format!("{v:.16e}")))?;
        }
        csv.flush().map_err(|e| TableError::Io {
            path: "<output>".into(),
            source: e,
        })?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }

    pub fn write_csv_file(&self, path: &std::path::Path) -> Result<(), TableError> {
        let file = std::fs::File::create(path).map_err(|e| TableError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|e| match e {
                TableError::Io { source, .. } => TableError::Io {
                    path: path.display().to_string(),
                    source,
                },
                other => other,
            })
    }
}
