//! On-disk result cache: one JSON file per key, each carrying the SHA-256 of
//! its payload. Entries that fail to parse or to verify are dropped.

use crate::error::Result;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    sha256: String,
    payload: String,
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(Cache { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Key for an operation on a family over `F_{p^a}` with the given modulus.
    pub fn key(p: u32, a: usize, modulus: &[u32], op: &str, args: &str) -> String {
        digest(&format!("{p}|{a}|{modulus:?}|{op}|{args}"))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let path = self.path(key);
        let raw = fs::read_to_string(&path).ok()?;
        let parsed = serde_json::from_str::<Entry>(&raw)
            .ok()
            .filter(|e| digest(&e.payload) == e.sha256)
            .and_then(|e| serde_json::from_str::<T>(&e.payload).ok());
        if parsed.is_none() {
            log::warn!("discarding corrupt cache entry {}", path.display());
            let _ = fs::remove_file(&path);
        }
        parsed
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        let payload = serde_json::to_string(value)?;
        let entry = Entry { sha256: digest(&payload), payload };
        let tmp = self.dir.join(format!("{key}.tmp"));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(tmp, self.path(key))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let k = Cache::key(7, 1, &[0, 1], "op", "x");
        assert_eq!(c.get::<Vec<u32>>(&k), None);
        c.put(&k, &vec![1u32, 2, 3]).unwrap();
        assert_eq!(c.get::<Vec<u32>>(&k), Some(vec![1, 2, 3]));
        let path = dir.path().join(format!("{k}.json"));
        let raw = fs::read_to_string(&path).unwrap().replace("[1,2,3]", "[1,2,4]");
        fs::write(&path, raw).unwrap();
        assert_eq!(c.get::<Vec<u32>>(&k), None);
        assert!(!path.exists());
        assert_ne!(k, Cache::key(7, 1, &[0, 1], "op", "y"));
    }
}
