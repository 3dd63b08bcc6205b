use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ScenarioRecord;

/// Version of the on-disk scenario format.
pub const SCHEMA_VERSION: u32 = 1;

/// The on-disk document: a JSON object holding the schema version and
/// the records. Floats are written in shortest round-trip form, so a
/// save/load cycle reproduces every value bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub records: Vec<ScenarioRecord>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioIoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scenario file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema_version {found} (expected {SCHEMA_VERSION})")]
    Version { found: u32 },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ScenarioIoError + '_ {
    move |source| ScenarioIoError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn save_to_string(records: &[ScenarioRecord]) -> String {
    let doc = ScenarioFileRef {
        schema_version: SCHEMA_VERSION,
        records,
    };
    serde_json::to_string(&doc).expect("records serialize")
}

pub fn save(records: &[ScenarioRecord], path: &Path) -> Result<(), ScenarioIoError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let doc = ScenarioFileRef {
        schema_version: SCHEMA_VERSION,
        records,
    };
    serde_json::to_writer(&mut w, &doc)?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

fn check(doc: ScenarioFile) -> Result<Vec<ScenarioRecord>, ScenarioIoError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(ScenarioIoError::Version {
            found: doc.schema_version,
        });
    }
    Ok(doc.records)
}

pub fn load_from_str(text: &str) -> Result<Vec<ScenarioRecord>, ScenarioIoError> {
    check(serde_json::from_str(text)?)
}

pub fn load(path: &Path) -> Result<Vec<ScenarioRecord>, ScenarioIoError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    check(serde_json::from_reader(BufReader::new(file))?)
}

#[derive(Serialize)]
struct ScenarioFileRef<'a> {
    schema_version: u32,
    records: &'a [ScenarioRecord],
}
