//! Content-addressed on-disk cache for generated coefficient tables.
//!
//! A cache entry is keyed by the SHA-256 digest of a *descriptor* string
//! that spells out everything the contents depend on (shape, family,
//! bound, and the code version).  Identical requests therefore hit the same
//! file, and any change to the descriptor — including a crate version bump —
//! keys a fresh entry.
//!
//! The cache lives under the directory named by the `SUPERWIG_CACHE_DIR`
//! environment variable.  When the variable is unset the cache is disabled:
//! lookups miss and stores are silent no-ops, so callers never need to care
//! whether caching is active.

use sha2::{Digest, Sha256};
use std::fs;
use std::io;
use std::path::PathBuf;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "SUPERWIG_CACHE_DIR";

/// Descriptor for a coefficient table: everything its contents depend on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDescriptor {
    pub m: usize,
    pub n: usize,
    /// `"covariant"` or `"contravariant"`.
    pub family: String,
    /// Inclusive bound on the absolute value of weight labels.
    pub max_label: i64,
}

impl TableDescriptor {
    /// The canonical descriptor string hashed into the cache key.
    pub fn descriptor(&self) -> String {
        format!(
            "superwig-table-v{};m={};n={};family={};max_label={}",
            env!("CARGO_PKG_VERSION"),
            self.m,
            self.n,
            self.family,
            self.max_label
        )
    }

    /// Hex SHA-256 of the descriptor string.
    pub fn key(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.descriptor().as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// The configured cache directory, if caching is enabled.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

fn entry_path(key: &str) -> Option<PathBuf> {
    cache_dir().map(|dir| dir.join(format!("{key}.json")))
}

/// Fetch a cached table, if the cache is enabled and holds the key.
pub fn lookup(descriptor: &TableDescriptor) -> Option<String> {
    let path = entry_path(&descriptor.key())?;
    fs::read_to_string(path).ok()
}

/// Store a table under its descriptor key.  Returns the path written, or
/// `None` when caching is disabled.  Errors from the filesystem propagate.
pub fn store(descriptor: &TableDescriptor, contents: &str) -> io::Result<Option<PathBuf>> {
    let Some(path) = entry_path(&descriptor.key()) else {
        return Ok(None);
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(&path, contents)?;
    Ok(Some(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn descriptor() -> TableDescriptor {
        TableDescriptor {
            m: 1,
            n: 1,
            family: "covariant".into(),
            max_label: 3,
        }
    }

    #[test]
    fn key_is_stable_and_content_sensitive() {
        let a = descriptor();
        assert_eq!(a.key(), a.key());
        let mut b = descriptor();
        b.max_label = 4;
        assert_ne!(a.key(), b.key());
        assert_eq!(a.key().len(), 64);
    }

    #[test]
    fn roundtrip_via_env_dir() {
        let dir = tempfile::tempdir().unwrap();
        // Serialize access to the process-global variable.
        std::env::set_var(CACHE_DIR_ENV, dir.path());
        let d = descriptor();
        assert!(lookup(&d).is_none());
        let path = store(&d, "{\"rows\":[]}").unwrap().unwrap();
        assert!(path.starts_with(dir.path()));
        assert_eq!(lookup(&d).unwrap(), "{\"rows\":[]}");
        std::env::remove_var(CACHE_DIR_ENV);
        assert!(lookup(&d).is_none());
    }
}
