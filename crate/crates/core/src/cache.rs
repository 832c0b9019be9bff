//! On-disk result cache keyed by a SHA-256 content hash.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ehrhart::LatticePolytope;
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "SEPKIT_CACHE";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    /// Recompute on every hit and fail if the stored value differs.
    verify_hits: bool,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: dir.into(),
            verify_hits: false,
        }
    }

    /// `SEPKIT_CACHE` wins over `dir`; `None` when neither is set.
    pub fn from_env_or(dir: Option<PathBuf>) -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or(dir)
            .map(Cache::new)
    }

    pub fn verifying(mut self, on: bool) -> Self {
        self.verify_hits = on;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: &str, key: &str) -> PathBuf {
        self.dir.join(kind).join(format!("{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(kind, key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes through a temporary file so concurrent readers never see a
    /// partial entry.
    pub fn put<T: Serialize>(&self, kind: &str, key: &str, value: &T) -> Result<()> {
        let path = self.path(kind, key);
        let parent = path.parent().expect("entry path has a parent");
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_string(value)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn get_or_compute<T, F>(&self, kind: &str, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned + PartialEq,
        F: FnOnce() -> Result<T>,
    {
        if let Some(hit) = self.get::<T>(kind, key) {
            if self.verify_hits {
                let fresh = compute()?;
                if fresh != hit {
                    return Err(Error::Invariant(format!(
                        "cache entry {kind}/{key} differs from a fresh computation"
                    )));
                }
            }
            return Ok(hit);
        }
        let v = compute()?;
        self.put(kind, key, &v)?;
        Ok(v)
    }
}

pub fn content_key(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

/// Hash of the ambient dimension and the sorted vertex list, so vertex
/// order and labels do not matter.
pub fn polytope_key(p: &LatticePolytope) -> String {
    let verts = serde_json::to_vec(&p.sorted_vertices()).expect("integers serialize");
    content_key(&[b"polytope", &p.ambient_dim().to_le_bytes(), &verts])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stores_and_reads_back() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        assert_eq!(c.get::<Vec<u32>>("k", "a"), None);
        let v = c.get_or_compute("k", "a", || Ok(vec![1u32, 2])).unwrap();
        assert_eq!(v, vec![1, 2]);
        // second call must not recompute
        let v: Vec<u32> = c.get_or_compute("k", "a", || panic!("recomputed")).unwrap();
        assert_eq!(v, vec![1, 2]);
    }

    #[test]
    fn verification_catches_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path()).verifying(true);
        c.put("k", "a", &vec![9u32]).unwrap();
        assert!(c.get_or_compute("k", "a", || Ok(vec![1u32])).is_err());
        assert!(c.get_or_compute("k", "b", || Ok(vec![1u32])).is_ok());
        assert_eq!(c.get_or_compute("k", "b", || Ok(vec![1u32])).unwrap(), vec![1]);
    }

    #[test]
    fn key_ignores_vertex_order() {
        let a = LatticePolytope::new(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap();
        let b = LatticePolytope::new(2, vec![vec![0, -1], vec![0, 1], vec![-1, 0], vec![1, 0]]).unwrap();
        let c = LatticePolytope::new(2, vec![vec![1, 1], vec![-1, -1], vec![0, 1], vec![0, -1]]).unwrap();
        assert_eq!(polytope_key(&a), polytope_key(&b));
        assert_ne!(polytope_key(&a), polytope_key(&c));
        assert_eq!(polytope_key(&a).len(), 64);
    }
}
