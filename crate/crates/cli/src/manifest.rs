use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    /// Wall-clock start; the only field that differs between identical runs.
    pub started: String,
    pub config: BTreeMap<String, String>,
    pub exit_code: i32,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            started: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config: BTreeMap::new(),
            exit_code: 0,
            warnings: Vec::new(),
            error: None,
            outputs: Vec::new(),
        }
    }

    pub fn path(out_dir: &Path, command: &str) -> PathBuf {
        out_dir.join(format!("{command}_manifest.json"))
    }

    pub fn write(&self, out_dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(out_dir)?;
        let text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(Self::path(out_dir, &self.command), text + "\n")
    }
}
