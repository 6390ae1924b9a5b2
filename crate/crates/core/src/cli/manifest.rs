//! Run manifests: config snapshot, input digests and tool version.
//!
//! A manifest is also a valid `--config` argument; loading one re-checks the
//! recorded digests before anything runs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::{Error, Result};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub inputs: BTreeMap<String, InputDigest>,
    pub config: RunConfig,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl Manifest {
    /// Snapshot `config`, hashing every input it references.
    pub fn capture(command: &str, config: &RunConfig) -> Result<Self> {
        let inputs = config
            .input_paths()
            .into_iter()
            .map(|(key, path)| {
                Ok((
                    key.to_string(),
                    InputDigest {
                        path: path.to_path_buf(),
                        sha256: sha256_file(path)?,
                    },
                ))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            tool: TOOL_NAME.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            config: config.clone(),
        })
    }

    pub fn file_name(command: &str) -> String {
        format!("manifest_{command}.toml")
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("manifest encoding: {e}")))
    }

    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("{}: {e}", source.display())))
    }

    /// Fail if any recorded input is missing or no longer matches its digest.
    pub fn verify(&self) -> Result<()> {
        for (key, input) in &self.inputs {
            let actual = sha256_file(&input.path)?;
            if actual != input.sha256 {
                return Err(Error::Config(format!(
                    "{key} {} changed since the manifest was written (sha256 {actual}, expected {})",
                    input.path.display(),
                    input.sha256
                )));
            }
        }
        Ok(())
    }
}

/// Whether a parsed TOML document is a manifest rather than a plain config.
pub fn looks_like_manifest(text: &str) -> bool {
    text.parse::<toml::Table>()
        .map(|t| t.contains_key("tool_version") && t.contains_key("config"))
        .unwrap_or(false)
}
