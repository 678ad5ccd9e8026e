//! Persistent cache of computed dimension vectors and verification reports.
//! Records are keyed by family, level, and kind, validated against the
//! content hash of the freshly regenerated presentation, and written with
//! temp-file-then-atomic-rename semantics.

use crate::betti::BettiVector;
use crate::strata::Family;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable naming the cache directory when no flag is given.
pub const CACHE_ENV: &str = "STRATA_RINGS_CACHE";

/// The JSON record for one Betti vector.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BettiRecord {
    pub family: String,
    pub ell: u32,
    pub dims: Vec<u64>,
    pub method: String,
    pub truncated_at: Option<u32>,
    pub tool_version: String,
    pub presentation_hash: String,
}

impl BettiRecord {
    pub fn from_vector(v: &BettiVector, presentation_hash: String) -> BettiRecord {
        BettiRecord {
            family: v.family.as_str().to_string(),
            ell: v.ell,
            dims: v.display_dims(),
            method: v.method.as_str().to_string(),
            truncated_at: v.truncated_at,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            presentation_hash,
        }
    }
}

/// Hash stamped on recursion-method records; the recursion has no
/// presentation to regenerate, so the descriptor is hashed instead.
pub fn recursion_hash(family: Family, ell: u32) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(format!("betti-recursion/v1:{family}:{ell}").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// The JSON record for one cached verification report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportRecord {
    pub family: String,
    pub ell: u32,
    pub check: String,
    pub degree_bound: Option<u32>,
    pub pass: bool,
    pub payload: serde_json::Value,
    pub tool_version: String,
    pub presentation_hash: String,
}

/// A directory-backed record store.
pub struct Cache {
    dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    Stale,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Cache {
        Cache { dir }
    }

    /// Flag beats environment; neither means no cache.
    pub fn resolve(flag: Option<PathBuf>) -> Option<Cache> {
        flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Returns the raw payload when the stored record's hash field matches
    /// the expected hash; stale or unreadable records count as misses.
    pub fn get(&self, key: &str, expected_hash: &str) -> (Option<String>, CacheOutcome) {
        let path = self.path(key);
        let Ok(data) = std::fs::read_to_string(&path) else {
            return (None, CacheOutcome::Miss);
        };
        let Ok(value) = serde_json::from_str::<serde_json::Value>(&data) else {
            return (None, CacheOutcome::Stale);
        };
        let stored = value
            .get("presentation_hash")
            .and_then(|h| h.as_str())
            .unwrap_or_default();
        if stored == expected_hash {
            (Some(data), CacheOutcome::Hit)
        } else {
            (None, CacheOutcome::Stale)
        }
    }

    /// Atomic write: temp file in the cache directory, then rename. An
    /// existing record with the same bytes is left untouched.
    pub fn put(&self, key: &str, payload: &str) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path(key);
        if let Ok(existing) = std::fs::read_to_string(&path) {
            if existing == payload {
                return Ok(());
            }
        }
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(payload.as_bytes())?;
        tmp.persist(&path).map_err(|e| crate::Error::Io(e.error))?;
        Ok(())
    }
}
