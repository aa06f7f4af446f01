//! On-disk cache of closure results, one JSON file per key.
//!
//! Entries are keyed by the spec hash, the subspace (or the full space) and
//! the exact tolerance. Files are written to a temporary name and renamed
//! into place.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cg::SubspaceSelection;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub spec_hash: String,
    /// `None` for the full space.
    pub selection: Option<SubspaceSelection>,
    pub tol: f64,
    /// Distinguishes result types stored under the same inputs.
    pub kind: String,
}

impl CacheKey {
    pub fn file_name(&self) -> String {
        let canonical = serde_json::to_string(self).expect("keys serialize");
        format!("{:x}.json", Sha256::digest(canonical.as_bytes()))
    }
}

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    key: CacheKey,
    value: T,
}

#[derive(Debug, Clone)]
pub struct ClosureCache {
    dir: PathBuf,
}

impl ClosureCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Stored value for `key`; unreadable or mismatched files count as misses.
    pub fn get<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        let text = fs::read_to_string(self.dir.join(key.file_name())).ok()?;
        let entry: Entry<T> = serde_json::from_str(&text).ok()?;
        (entry.key == *key).then_some(entry.value)
    }

    pub fn put<T: Serialize>(&self, key: &CacheKey, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let name = key.file_name();
        let tmp = self.dir.join(format!(".{name}.{}.tmp", std::process::id()));
        let text = serde_json::to_string_pretty(&Entry { key: key.clone(), value })?;
        fs::write(&tmp, text)?;
        fs::rename(&tmp, self.dir.join(name))?;
        Ok(())
    }
}
