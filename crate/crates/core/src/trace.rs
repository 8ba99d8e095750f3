//! Per-iteration run records shared by every engine, with CSV export.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Learning,
    #[serde(rename = "selforg")]
    SelfOrg,
    Explore,
}

/// One row of a trace. `fields` must line up with the trace's columns.
pub trait TraceRecord {
    fn fields(&self) -> Vec<String>;
}

/// Config echo, seed and wall-clock duration of a run. Never written into
/// the CSV files, which stay byte-identical across repeated runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TraceMetadata {
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub duration_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunTrace<R> {
    pub kind: TraceKind,
    pub columns: Vec<String>,
    pub records: Vec<R>,
    pub metadata: TraceMetadata,
}

impl<R: TraceRecord> RunTrace<R> {
    pub fn new(kind: TraceKind, columns: Vec<String>, seed: u64) -> Self {
        Self {
            kind,
            columns,
            records: Vec::new(),
            metadata: TraceMetadata {
                seed,
                ..TraceMetadata::default()
            },
        }
    }

    pub fn push(&mut self, record: R) {
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&R> {
        self.records.last()
    }

    pub fn echo(&mut self, key: &str, value: impl ToString) {
        self.metadata
            .config
            .insert(key.to_string(), value.to_string());
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for r in &self.records {
            w.write_record(r.fields())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> csv::Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(io::BufWriter::new(file))
    }
}
