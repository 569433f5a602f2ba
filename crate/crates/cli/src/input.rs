use std::io::Read;
use std::path::Path;

use knotfloer::diagram::{builtins, parse_diagram, Diagram};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Raw diagram bytes with the name they were requested under.
pub struct DiagramInput {
    pub label: String,
    pub builtin: Option<String>,
    bytes: Vec<u8>,
}

impl DiagramInput {
    pub fn builtin(name: &str) -> Result<Self, CliError> {
        let entry = builtins().get(name).ok_or_else(|| {
            CliError::Input(format!(
                "unknown builtin `{name}` (available: {})",
                builtins().names().join(", ")
            ))
        })?;
        Ok(Self {
            label: name.to_string(),
            builtin: Some(name.to_string()),
            bytes: entry.source.as_bytes().to_vec(),
        })
    }

    pub fn file(path: &Path) -> Result<Self, CliError> {
        let bytes = if path == Path::new("-") {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| CliError::Input(format!("standard input: {e}")))?;
            buf
        } else {
            std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        };
        Ok(Self {
            label: path.display().to_string(),
            builtin: None,
            bytes,
        })
    }

    pub fn diagram(&self) -> Result<Diagram, CliError> {
        Ok(parse_diagram(&self.bytes)?)
    }

    pub fn digest(&self) -> String {
        digest(&self.bytes)
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}
