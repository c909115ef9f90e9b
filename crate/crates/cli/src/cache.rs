//! A JSON file of computed component bases.
//!
//! Entries are keyed by engine version, modulus, variable count, a SHA-256
//! fingerprint of the spec's canonical text and the multidegree. Each entry
//! carries a checksum over its content; an entry whose checksum does not match,
//! or a file that does not parse, is treated as absent.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tspace_core::tspace::{BasisKey, BasisStore, ComponentBasis};
use tspace_core::{Error, MultiDegree, Result, VERSION};

const FORMAT: &str = "tspace-basis-cache";
const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct EntryKey {
    engine_version: String,
    p: u32,
    n: usize,
    spec_fingerprint: String,
    d: MultiDegree,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Entry {
    key: EntryKey,
    basis: ComponentBasis,
    checksum: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    entries: Vec<Entry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn entry_key(key: &BasisKey) -> EntryKey {
    EntryKey {
        engine_version: VERSION.to_string(),
        p: key.p,
        n: key.n,
        spec_fingerprint: sha256_hex(key.spec.as_bytes()),
        d: key.d.clone(),
    }
}

fn checksum(key: &EntryKey, basis: &ComponentBasis) -> String {
    let body = serde_json::to_vec(&(key, basis)).expect("plain data serializes");
    sha256_hex(&body)
}

fn map_key(k: &EntryKey) -> String {
    format!(
        "{}|{}|{}|{}|{}",
        k.engine_version, k.p, k.n, k.spec_fingerprint, k.d
    )
}

pub struct JsonCache {
    path: PathBuf,
    entries: Mutex<BTreeMap<String, Entry>>,
    /// Entries dropped while loading because they failed verification.
    rejected: usize,
}

impl JsonCache {
    /// Opens `path`; a missing or unreadable file gives an empty cache.
    pub fn open(path: &Path) -> JsonCache {
        let mut entries = BTreeMap::new();
        let mut rejected = 0;
        let parsed = fs::read(path)
            .ok()
            .and_then(|b| serde_json::from_slice::<CacheFile>(&b).ok());
        if let Some(file) = parsed.filter(|f| f.format == FORMAT && f.version == FORMAT_VERSION) {
            for e in file.entries {
                if e.checksum == checksum(&e.key, &e.basis) && e.basis.d == e.key.d {
                    entries.insert(map_key(&e.key), e);
                } else {
                    rejected += 1;
                }
            }
        }
        JsonCache {
            path: path.to_path_buf(),
            entries: Mutex::new(entries),
            rejected,
        }
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    #[cfg(test)]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rejected(&self) -> usize {
        self.rejected
    }

    /// Writes the cache back, replacing the file atomically.
    pub fn persist(&self) -> Result<()> {
        let entries: Vec<Entry> = self
            .entries
            .lock()
            .expect("cache lock")
            .values()
            .cloned()
            .collect();
        let file = CacheFile {
            format: FORMAT.into(),
            version: FORMAT_VERSION,
            entries,
        };
        let bytes = serde_json::to_vec(&file)
            .map_err(|e| Error::Argument(format!("cache encoding failed: {e}")))?;
        let tmp = self.path.with_extension("tmp");
        let io = |e: std::io::Error| {
            Error::Argument(format!("cannot write cache {}: {e}", self.path.display()))
        };
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(&bytes).map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, &self.path).map_err(io)?;
        Ok(())
    }
}

impl BasisStore for JsonCache {
    fn load(&self, key: &BasisKey) -> Option<ComponentBasis> {
        let k = entry_key(key);
        self.entries
            .lock()
            .expect("cache lock")
            .get(&map_key(&k))
            .map(|e| e.basis.clone())
    }

    fn save(&self, key: &BasisKey, basis: &ComponentBasis) {
        let k = entry_key(key);
        let entry = Entry {
            checksum: checksum(&k, basis),
            key: k.clone(),
            basis: basis.clone(),
        };
        self.entries
            .lock()
            .expect("cache lock")
            .insert(map_key(&k), entry);
    }
}
