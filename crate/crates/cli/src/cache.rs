//! File-backed, content-addressed result cache.
//!
//! Each entry is `<root>/<sha256 of the key>.json` holding the key and the
//! value. Entries that fail to parse or whose stored key differs are treated
//! as misses. Writes go to a temporary file that is renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever the meaning of cached values changes.
const FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    key: Value,
    value: Value,
}

pub struct Cache {
    root: Option<PathBuf>,
}

impl Cache {
    /// A cache that never stores anything.
    pub fn disabled() -> Cache {
        Cache { root: None }
    }

    /// Opens (creating if needed) a cache directory. An unusable directory
    /// produces a warning and a disabled cache.
    pub fn open(root: &Path) -> Cache {
        match fs::create_dir_all(root).and_then(|_| probe_writable(root)) {
            Ok(()) => Cache { root: Some(root.to_path_buf()) },
            Err(e) => {
                eprintln!("warning: cache directory {} is not usable ({e}); running without cache", root.display());
                Cache::disabled()
            }
        }
    }

    fn key_value(key: &impl Serialize) -> Value {
        serde_json::json!({ "format": FORMAT, "key": key })
    }

    fn path_for(&self, key: &Value) -> Option<PathBuf> {
        let root = self.root.as_ref()?;
        let digest = Sha256::digest(key.to_string().as_bytes());
        Some(root.join(format!("{}.json", hex::encode(digest))))
    }

    pub fn lookup<T: DeserializeOwned>(&self, key: &impl Serialize) -> Option<T> {
        let key = Self::key_value(key);
        let text = fs::read_to_string(self.path_for(&key)?).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.key != key {
            return None;
        }
        serde_json::from_value(entry.value).ok()
    }

    pub fn store<T: Serialize>(&mut self, key: &impl Serialize, value: &T) {
        let key = Self::key_value(key);
        let Some(path) = self.path_for(&key) else { return };
        let entry = Entry { key, value: serde_json::to_value(value).expect("serializable value") };
        if let Err(e) = write_atomically(&path, &serde_json::to_vec(&entry).expect("serializable entry")) {
            eprintln!("warning: could not write cache entry {} ({e}); running without cache", path.display());
            self.root = None;
        }
    }

    /// Cached value for `key`, computing and storing it on a miss.
    pub fn get_or_compute<T, E>(&mut self, key: &impl Serialize, f: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        if let Some(v) = self.lookup(key) {
            return Ok(v);
        }
        let v = f()?;
        self.store(key, &v);
        Ok(v)
    }
}

fn probe_writable(root: &Path) -> std::io::Result<()> {
    let probe = root.join(format!(".probe-{}", std::process::id()));
    fs::write(&probe, b"")?;
    fs::remove_file(&probe)
}

fn write_atomically(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().expect("cache entries live in a directory");
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
        std::process::id()
    ));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sl3_pretzel::QLaurent;

    fn sample() -> QLaurent {
        QLaurent::from_terms([(-8, 3), (6, -2)])
    }

    #[test]
    fn round_trip_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = Cache::open(dir.path());
        assert!(c.lookup::<QLaurent>(&("compute", 1)).is_none());
        c.store(&("compute", 1), &sample());
        assert_eq!(c.lookup::<QLaurent>(&("compute", 1)), Some(sample()));
        assert!(c.lookup::<QLaurent>(&("compute", 2)).is_none());
    }

    #[test]
    fn corrupted_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = Cache::open(dir.path());
        c.store(&"k", &sample());
        let path = c.path_for(&Cache::key_value(&"k")).unwrap();
        fs::write(&path, b"{ not json").unwrap();
        assert!(c.lookup::<QLaurent>(&"k").is_none());
        let v: Result<QLaurent, ()> = c.get_or_compute(&"k", || Ok(sample()));
        assert_eq!(v.unwrap(), sample());
        assert_eq!(c.lookup::<QLaurent>(&"k"), Some(sample()));
    }

    #[test]
    fn disabled_cache_never_hits() {
        let mut c = Cache::disabled();
        c.store(&"k", &sample());
        assert!(c.lookup::<QLaurent>(&"k").is_none());
    }
}
