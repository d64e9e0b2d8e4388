use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// A file read by the run, identified by the hash of its contents.
#[derive(Clone, Debug, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

/// Everything that determines the output of a run. The run id hashes the
/// serialized config, so equal configs on equal inputs share an id.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub run_id: String,
    pub command: String,
    pub inputs: Vec<Input>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    pub budget: u64,
    pub precision: u32,
    pub max_period: Vec<u32>,
    pub seeds: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    pub fn seal(mut self) -> Self {
        self.run_id.clear();
        let text = toml::to_string(&self).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        self.run_id = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        self
    }
}

pub fn read_input(path: &Path) -> Result<(String, Input)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let digest = Sha256::digest(text.as_bytes());
    let input = Input {
        path: path.display().to_string(),
        sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
    };
    Ok((text, input))
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: &'a RunConfig,
    result: &'a T,
}

pub fn render_report<T: Serialize>(config: &RunConfig, result: &T) -> Result<String> {
    toml::to_string(&Report { config, result }).context("serializing report")
}

/// Writes `name` under the output directory, creating it if needed.
pub fn write_artifact(out: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let path = out.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
