use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use dpsbp::operator::{DualPairOperator, OperatorFile};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run. No timestamps, so rerunning
/// the same command gives the same bytes.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub operator_hashes: BTreeMap<String, String>,
    pub tool_version: String,
    pub outputs: Vec<OutputEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the canonical operator file text.
pub fn operator_hash(op: &DualPairOperator) -> Result<String, CliError> {
    Ok(sha256_hex(OperatorFile::from(op).to_json()?.as_bytes()))
}

impl RunManifest {
    pub fn new(command: &str, config: &impl Serialize) -> Result<Self, CliError> {
        Ok(RunManifest {
            command: command.into(),
            config: serde_json::to_value(config)?,
            operator_hashes: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            outputs: Vec::new(),
        })
    }

    pub fn add_operator(&mut self, op: &DualPairOperator) -> Result<(), CliError> {
        let h = operator_hash(op)?;
        self.operator_hashes.insert(op.name.clone(), h);
        Ok(())
    }

    /// Write `bytes` to `path` and record it.
    pub fn emit(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, bytes)?;
        self.outputs.push(OutputEntry { path: path.display().to_string(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    /// Saved next to the first output unless a path is given. Nothing is
    /// written when the run produced no files.
    pub fn finish(self, explicit: Option<&Path>) -> Result<Option<PathBuf>, CliError> {
        let target = match (explicit, self.outputs.first()) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(first)) => PathBuf::from(format!("{}.manifest.json", first.path)),
            (None, None) => return Ok(None),
        };
        let mut text = serde_json::to_string_pretty(&self)?;
        text.push('\n');
        fs::write(&target, text)?;
        Ok(Some(target))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha_of_empty() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn operator_hash_is_stable() {
        let op = dpsbp::operator::builtin("drp5").unwrap();
        assert_eq!(operator_hash(&op).unwrap(), operator_hash(&op.clone()).unwrap());
        let other = dpsbp::operator::builtin("drp6").unwrap();
        assert_ne!(operator_hash(&op).unwrap(), operator_hash(&other).unwrap());
    }
}
