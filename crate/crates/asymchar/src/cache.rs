//! Content-addressed result cache on the file system.
//!
//! An entry is `<dir>/<key>.json` where `key` is the SHA-256 of the
//! canonical request. The first line of the file is the SHA-256 of the
//! rest, checked on every read.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache entry {0} is corrupt (hash mismatch)")]
    Corrupt(PathBuf),
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cache entry {path} is not valid JSON: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

pub struct Cache {
    dir: PathBuf,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|source| CacheError::Io { path: dir.clone(), source })?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Key of a request; `serde_json` writes object keys in insertion
    /// order, so callers build requests in a fixed order.
    pub fn key(request: &Value) -> String {
        digest(request.to_string().as_bytes())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<Value>, CacheError> {
        let path = self.path(key);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        let split = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| CacheError::Corrupt(path.clone()))?;
        let (head, body) = (&bytes[..split], &bytes[split + 1..]);
        if head != digest(body).as_bytes() {
            return Err(CacheError::Corrupt(path));
        }
        serde_json::from_slice(body).map(Some).map_err(|source| CacheError::Json { path, source })
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place, so readers never see a partial entry.
    pub fn store(&self, key: &str, value: &Value) -> Result<(), CacheError> {
        let path = self.path(key);
        let body = serde_json::to_vec(value).map_err(|source| CacheError::Json { path: path.clone(), source })?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        let io = |source| CacheError::Io { path: tmp.clone(), source };
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(digest(&body).as_bytes()).map_err(io)?;
        f.write_all(b"\n").map_err(io)?;
        f.write_all(&body).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        fs::rename(&tmp, &path).map_err(|source| CacheError::Io { path: path.clone(), source })
    }
}
