use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::spec::ExperimentSpec;

#[derive(Debug, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Provenance record written next to every run's artifacts.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// SHA-256 of the canonical spec JSON.
    pub input_hash: String,
    pub wall_time_seconds: f64,
    pub files: Vec<FileEntry>,
}

pub fn spec_hash(spec: &ExperimentSpec) -> String {
    let canonical = serde_json::to_vec(spec).expect("spec serializes");
    hex::encode(Sha256::digest(canonical))
}

/// Collects emitted files as they are written.
#[derive(Debug)]
pub struct Artifacts {
    out: PathBuf,
    files: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(out: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(out)?;
        Ok(Artifacts {
            out: out.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> std::io::Result<PathBuf> {
        let path = self.out.join(name);
        fs::write(&path, contents)?;
        if !self.files.contains(&path) {
            self.files.push(path.clone());
        }
        Ok(path)
    }

    pub fn finish(self, spec: &ExperimentSpec, wall_time_seconds: f64) -> std::io::Result<Manifest> {
        let mut files = Vec::with_capacity(self.files.len());
        for path in &self.files {
            let bytes = fs::read(path)?;
            files.push(FileEntry {
                path: path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                sha256: hex::encode(Sha256::digest(&bytes)),
                bytes: bytes.len() as u64,
            });
        }
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: spec.command.name().to_string(),
            input_hash: spec_hash(spec),
            wall_time_seconds,
            files,
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(self.out.join("manifest.json"), json)?;
        Ok(manifest)
    }
}
