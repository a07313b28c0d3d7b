//! Run manifest: what a `run` invocation produced and from which inputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_path: String,
    pub seed: u64,
    /// Paths of every artifact the run produced; all exist by the time the
    /// manifest itself is written (the manifest is written last).
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    pub started_at: String,
}

impl RunManifest {
    pub fn new(config_path: String, seed: u64) -> Self {
        Self {
            config_path,
            seed,
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: chrono::Utc::now().to_rfc3339(),
        }
    }

    /// Write the manifest after verifying every listed output exists.
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        for output in &self.outputs {
            if !output.exists() {
                return Err(CliError::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("manifest lists missing output {}", output.display()),
                )));
            }
        }
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
        std::fs::write(path, json)?;
        Ok(())
    }
}
