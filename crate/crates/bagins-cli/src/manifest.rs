//! Run manifests: enough resolved state to reproduce a run byte-for-byte.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config_source: String,
    pub config_digest: String,
    pub config: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        seed: Option<u64>,
        config_source: &str,
        config: serde_json::Value,
        inputs: &[&Path],
        outputs: &[&Path],
    ) -> RunManifest {
        let digest = Sha256::digest(config.to_string().as_bytes());
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config_source: config_source.to_string(),
            config_digest: hex::encode(digest),
            config,
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }

    /// Writes `<out>.manifest.json` next to the primary output.
    pub fn write_next_to(&self, out: &Path) -> Result<PathBuf, CliError> {
        let path = manifest_path(out);
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Writes via a temp file in the target directory plus an atomic rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut file = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir),
        None => tempfile::NamedTempFile::new_in("."),
    }
    .map_err(|e| {
        CliError::input(format!(
            "cannot create temp file for {}: {e}",
            path.display()
        ))
    })?;
    use std::io::Write;
    file.write_all(bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    file.persist(path)
        .map_err(|e| CliError::input(format!("cannot persist {}: {e}", path.display())))?;
    Ok(())
}

/// Reads a file with a friendlier error than the bare io message.
pub fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}
