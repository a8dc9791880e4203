use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// Tool identity stamped into every output document.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub cli_version: &'static str,
    pub core_version: &'static str,
    pub command: &'static str,
}

impl Provenance {
    pub fn new(command: &'static str) -> Self {
        Provenance {
            tool: "generank",
            cli_version: env!("CARGO_PKG_VERSION"),
            core_version: generank_core::VERSION,
            command,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}
