//! On-disk store for universal polynomials.
//!
//! Layout: `<dir>/Pn/<n>.json`, `<dir>/Pnm/<n>/<m>.json`, `<dir>/nu/<k>.json`.
//! Each file is an envelope `{"key", "sha256", "payload"}` whose payload is
//! the canonical polynomial JSON; the digest is taken over the payload bytes.
//! Writes go to a temporary file in the target directory and are renamed
//! into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::symfun::{seed_memo, PolyKind, UniversalPoly};

pub const CACHE_ENV: &str = "LAMBDA_FORGE_CACHE";

#[derive(Serialize, Deserialize)]
struct Envelope {
    key: String,
    sha256: String,
    payload: String,
}

/// Result of a cache read.
#[derive(Debug)]
pub enum Lookup {
    Hit(UniversalPoly),
    Missing,
    /// The file exists but failed validation; the reason is kept for reports.
    Corrupt(String),
}

/// How `get_or_compute` obtained its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Loaded,
    Computed,
    Recomputed { reason: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub bytes: u64,
    pub pn: usize,
    pub pnm: usize,
    pub nu: usize,
}

#[derive(Clone, Debug)]
pub struct PolyCache {
    dir: PathBuf,
}

fn digest(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

/// `$LAMBDA_FORGE_CACHE`, else `$XDG_CACHE_HOME/lambda-forge`, else
/// `$HOME/.cache/lambda-forge`.
pub fn default_cache_dir() -> Option<PathBuf> {
    let nonempty = |k: &str| {
        std::env::var_os(k)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    };
    nonempty(CACHE_ENV)
        .or_else(|| nonempty("XDG_CACHE_HOME").map(|p| p.join("lambda-forge")))
        .or_else(|| nonempty("HOME").map(|p| p.join(".cache").join("lambda-forge")))
}

impl PolyCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        PolyCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: PolyKind) -> PathBuf {
        let mut p = self.dir.clone();
        p.push(format!("{}.json", kind.cache_key()));
        p
    }

    pub fn load(&self, kind: PolyKind) -> Result<Lookup> {
        let path = self.path(kind);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Lookup::Missing),
            Err(e) if e.kind() == std::io::ErrorKind::InvalidData => {
                return Ok(Lookup::Corrupt("not valid UTF-8".into()))
            }
            Err(e) => return Err(e.into()),
        };
        let env: Envelope = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => return Ok(Lookup::Corrupt(format!("unreadable envelope: {e}"))),
        };
        if env.key != kind.cache_key() {
            return Ok(Lookup::Corrupt(format!(
                "key {} stored under {}",
                env.key,
                kind.cache_key()
            )));
        }
        if digest(&env.payload) != env.sha256 {
            return Ok(Lookup::Corrupt("checksum mismatch".into()));
        }
        match MultiPoly::from_json(&env.payload) {
            Ok(p) => Ok(Lookup::Hit(UniversalPoly::new(kind, p))),
            Err(e) => Ok(Lookup::Corrupt(format!("bad payload: {e}"))),
        }
    }

    pub fn store(&self, p: &UniversalPoly) -> Result<()> {
        let path = self.path(p.kind());
        let parent = path.parent().expect("cache path has a parent");
        fs::create_dir_all(parent)?;
        let payload = p.poly().to_json();
        let env = Envelope {
            key: p.kind().cache_key(),
            sha256: digest(&payload),
            payload,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
        tmp.write_all(
            serde_json::to_string(&env)
                .expect("envelope serializes")
                .as_bytes(),
        )?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Loads `kind`, or computes and stores it when missing or corrupt. The
    /// value is also placed in the in-process memo.
    pub fn get_or_compute(&self, kind: PolyKind) -> Result<(Arc<UniversalPoly>, Provenance)> {
        let (p, prov) = match self.load(kind)? {
            Lookup::Hit(p) => (p, Provenance::Loaded),
            Lookup::Missing => {
                let p = kind.compute()?;
                self.store(&p)?;
                (p, Provenance::Computed)
            }
            Lookup::Corrupt(reason) => {
                let p = kind.compute()?;
                self.store(&p)?;
                (p, Provenance::Recomputed { reason })
            }
        };
        seed_memo(p.clone());
        Ok((Arc::new(p), prov))
    }

    fn entries(&self) -> Vec<(PathBuf, &'static str)> {
        let mut out = Vec::new();
        for stem in ["Pn", "Pnm", "nu"] {
            let root = self.dir.join(stem);
            let mut stack = vec![root];
            while let Some(d) = stack.pop() {
                let Ok(rd) = fs::read_dir(&d) else { continue };
                for e in rd.flatten() {
                    let p = e.path();
                    if p.is_dir() {
                        stack.push(p);
                    } else if p.extension().is_some_and(|x| x == "json") {
                        out.push((p, stem));
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn stats(&self) -> CacheStats {
        let mut s = CacheStats::default();
        for (p, stem) in self.entries() {
            s.entries += 1;
            s.bytes += fs::metadata(&p).map(|m| m.len()).unwrap_or(0);
            match stem {
                "Pn" => s.pn += 1,
                "Pnm" => s.pnm += 1,
                _ => s.nu += 1,
            }
        }
        s
    }

    /// Removes every cache entry; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let n = self.entries().len();
        for stem in ["Pn", "Pnm", "nu"] {
            let d = self.dir.join(stem);
            if d.exists() {
                fs::remove_dir_all(d)?;
            }
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_then_load_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let c = PolyCache::new(dir.path());
        let kind = PolyKind::Pnm { n: 2, m: 2 };
        assert!(matches!(c.load(kind).unwrap(), Lookup::Missing));
        let p = kind.compute().unwrap();
        c.store(&p).unwrap();
        match c.load(kind).unwrap() {
            Lookup::Hit(q) => {
                assert_eq!(q, p);
                assert_eq!(q.poly().to_json(), p.poly().to_json());
            }
            other => panic!("expected hit, got {other:?}"),
        }
        assert!(c.path(kind).ends_with("Pnm/2/2.json"));
        assert_eq!(c.stats().pnm, 1);
    }

    #[test]
    fn corrupt_entry_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let c = PolyCache::new(dir.path());
        let kind = PolyKind::Pn { n: 2 };
        c.get_or_compute(kind).unwrap();
        let path = c.path(kind);
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("\\\"num\\\":\\\"1\\\"", "\\\"num\\\":\\\"7\\\"");
        fs::write(&path, text).unwrap();
        assert!(matches!(c.load(kind).unwrap(), Lookup::Corrupt(_)));
        let (p, prov) = c.get_or_compute(kind).unwrap();
        assert!(matches!(prov, Provenance::Recomputed { .. }));
        assert_eq!(*p, kind.compute().unwrap());
        assert_eq!(c.get_or_compute(kind).unwrap().1, Provenance::Loaded);

        fs::write(&path, "{ not json").unwrap();
        assert!(matches!(c.load(kind).unwrap(), Lookup::Corrupt(_)));
    }

    #[test]
    fn clear_removes_entries() {
        let dir = tempfile::tempdir().unwrap();
        let c = PolyCache::new(dir.path());
        c.get_or_compute(PolyKind::Nu { k: 3 }).unwrap();
        c.get_or_compute(PolyKind::Pn { n: 1 }).unwrap();
        assert_eq!(c.stats().entries, 2);
        assert_eq!(c.clear().unwrap(), 2);
        assert_eq!(c.stats(), CacheStats::default());
    }
}
