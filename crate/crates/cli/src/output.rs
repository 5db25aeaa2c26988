//! Artifact writing and the run manifest.

use crate::config::ScenarioConfig;
use crate::run::RunError;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const MANIFEST: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// One CSV line, every value with 17 significant digits.
pub fn csv_row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
    cells.join(",") + "\n"
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub subcommand: String,
    pub config_sha256: String,
    /// Package name to version.
    pub modules: BTreeMap<String, String>,
    pub files: Vec<FileEntry>,
    pub summary: BTreeMap<String, Value>,
}

pub struct Artifacts {
    dir: PathBuf,
    files: Vec<FileEntry>,
    summary: BTreeMap<String, Value>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self, RunError> {
        std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new(), summary: BTreeMap::new() })
    }

    pub fn bytes(&mut self, name: &str, data: &[u8]) -> Result<(), RunError> {
        let path = self.dir.join(name);
        std::fs::write(&path, data).map_err(|e| RunError::io(&path, e))?;
        self.files.retain(|f| f.path != name);
        self.files.push(FileEntry { path: name.into(), sha256: sha256_hex(data), bytes: data.len() });
        Ok(())
    }

    pub fn text(&mut self, name: &str, s: &str) -> Result<(), RunError> {
        self.bytes(name, s.as_bytes())
    }

    pub fn json(&mut self, name: &str, v: &impl Serialize) -> Result<(), RunError> {
        let mut s = serde_json::to_string_pretty(v).expect("artifact serializes to JSON");
        s.push('\n');
        self.text(name, &s)
    }

    pub fn summary(&mut self, key: &str, v: Value) {
        self.summary.insert(key.into(), v);
    }

    /// Writes the manifest over every file written so far.
    pub fn finish(mut self, subcommand: &str, cfg: &ScenarioConfig) -> Result<Manifest, RunError> {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        let modules = BTreeMap::from([
            ("cracktip".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("cracktip-core".to_string(), cracktip_core::VERSION.to_string()),
        ]);
        let m = Manifest {
            subcommand: subcommand.into(),
            config_sha256: sha256_hex(&cfg.canonical_bytes()),
            modules,
            files: self.files,
            summary: self.summary,
        };
        let path = self.dir.join(MANIFEST);
        let mut s = serde_json::to_string_pretty(&m).expect("manifest serializes to JSON");
        s.push('\n');
        std::fs::write(&path, s).map_err(|e| RunError::io(&path, e))?;
        Ok(m)
    }
}
