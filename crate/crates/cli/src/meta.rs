//! Provenance block attached to every output.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use srt_core::ValueWeights;

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub role: &'static str,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    /// SHA-256 of the effective parameters as written by [`json`], so for
    /// batch commands it equals the digest of the emitted `config.json`.
    pub config_hash: String,
    pub value_weights: ValueWeights,
    pub inputs: Vec<Input>,
}

impl Metadata {
    pub fn new<C: Serialize>(
        command: &'static str,
        config: &C,
        value_weights: ValueWeights,
        seed: Option<u64>,
    ) -> Result<Self> {
        Ok(Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            config_hash: sha256(&json(config)?),
            value_weights,
            inputs: Vec::new(),
        })
    }

    pub fn with_input(mut self, role: &'static str, bytes: &[u8]) -> Self {
        self.inputs.push(Input { role, sha256: sha256(bytes) });
        self
    }

    /// A single `#` comment line for CSV outputs.
    pub fn csv_header(&self) -> Result<String> {
        Ok(format!("# {}\n", serde_json::to_string(self)?))
    }
}

pub fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}
