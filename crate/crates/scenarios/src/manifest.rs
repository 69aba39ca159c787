//! Run manifests.
//!
//! A manifest is written with status `incomplete` before any data file and
//! rewritten with checksums once every file is closed, so a directory whose
//! manifest is still `incomplete` was interrupted.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{IntegratorSettings, Resolved, ScenarioId};
use crate::error::{io_err, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Incomplete,
    Complete,
    /// Finished, but some sweep points failed (listed in `failures`).
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    /// Relative to the manifest's directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFailure {
    pub point: usize,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Software {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub software: Software,
    pub scenario: ScenarioId,
    pub status: RunStatus,
    /// Seconds since the Unix epoch.
    pub started_at: f64,
    pub wall_clock_s: f64,
    pub parameters: Resolved,
    /// Original indices of the simulated sites, in internal order.
    pub original_sites: Vec<usize>,
    pub integrator: IntegratorSettings,
    pub files: Vec<FileRecord>,
    pub failures: Vec<PointFailure>,
    #[serde(skip)]
    clock: Option<Instant>,
}

impl RunManifest {
    pub fn start(params: &Resolved) -> Self {
        let started_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64());
        Self {
            schema_version: SCHEMA_VERSION,
            software: Software {
                name: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
            },
            scenario: params.scenario,
            status: RunStatus::Incomplete,
            started_at,
            wall_clock_s: 0.0,
            parameters: params.clone(),
            original_sites: params.original_sites(),
            integrator: params.integrator.clone(),
            files: Vec::new(),
            failures: Vec::new(),
            clock: Some(Instant::now()),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text + "\n").map_err(io_err(&path))?;
        Ok(path)
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Checksums `files` (relative to `dir`) and rewrites the manifest.
    pub fn finalize(&mut self, dir: &Path, files: &[PathBuf]) -> Result<()> {
        self.files = files.iter().map(|f| file_record(dir, f)).collect::<Result<_>>()?;
        self.status = if self.failures.is_empty() { RunStatus::Complete } else { RunStatus::Partial };
        if let Some(c) = self.clock {
            self.wall_clock_s = c.elapsed().as_secs_f64();
        }
        self.write(dir)?;
        Ok(())
    }

    /// Files whose current checksum differs from the recorded one.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for f in &self.files {
            let r = file_record(dir, Path::new(&f.path))?;
            if r.sha256 != f.sha256 || r.bytes != f.bytes {
                bad.push(f.path.clone());
            }
        }
        Ok(bad)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn file_record(dir: &Path, rel: &Path) -> Result<FileRecord> {
    let path = dir.join(rel);
    let bytes = std::fs::read(&path).map_err(io_err(&path))?;
    let rel = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
    Ok(FileRecord { path: rel, sha256: sha256_hex(&bytes), bytes: bytes.len() as u64 })
}
