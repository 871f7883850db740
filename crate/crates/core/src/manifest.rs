//! JSON sidecar manifests written next to bitstream files.
//!
//! A manifest always carries the exact `bit_length` of its data file (which
//! is headerless and byte-padded) plus a free-form `description`; callers
//! add whatever parameters they need to record.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::bits::write_atomic;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub bit_length: u64,
    pub description: String,
    #[serde(flatten)]
    pub fields: Map<String, Value>,
}

impl Manifest {
    pub fn new(bit_length: u64, description: impl Into<String>) -> Self {
        Self {
            bit_length,
            description: description.into(),
            fields: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.insert(key, value);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("manifest values are plain data");
        self.fields.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Writes the sidecar for `data_path`.
    pub fn write_for(&self, data_path: &Path) -> Result<()> {
        self.write(&sidecar_path(data_path))
    }

    pub fn read_for(data_path: &Path) -> Result<Self> {
        Self::read(&sidecar_path(data_path))
    }
}

/// `out.bin` → `out.bin.json`.
pub fn sidecar_path(data_path: &Path) -> PathBuf {
    let mut name = data_path.as_os_str().to_os_string();
    name.push(".json");
    PathBuf::from(name)
}
