//! On-disk caches of prime lists and family enumerations.
//!
//! A cache file is JSON lines: a header line with the format version, the key, the
//! record count and a SHA-256 checksum, then one line per record. A record is a list of
//! polynomials given by ascending coefficient vectors. The checksum covers the record
//! lines exactly as written, so a reload reproduces the original order or is rejected.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const CACHE_VERSION: u32 = 1;

pub type Record = Vec<Vec<u32>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub kind: &'static str,
    pub q: u32,
    /// Degree bound or genus.
    pub param: usize,
    pub variant: Option<String>,
}

impl CacheKey {
    fn file_name(&self) -> String {
        match &self.variant {
            Some(v) => format!("{}-q{}-{}-{}.jsonl", self.kind, self.q, self.param, v),
            None => format!("{}-q{}-{}.jsonl", self.kind, self.q, self.param),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Header {
    version: u32,
    kind: String,
    q: u32,
    param: usize,
    variant: Option<String>,
    records: usize,
    checksum: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub payload: Vec<Record>,
    pub checksum: String,
}

fn canonical_lines(payload: &[Record]) -> Vec<String> {
    payload.iter().map(|r| serde_json::to_string(r).expect("coefficient lists serialize")).collect()
}

fn checksum(lines: &[String]) -> String {
    let mut h = Sha256::new();
    for line in lines {
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

impl CacheEntry {
    pub fn new(key: CacheKey, payload: Vec<Record>) -> Self {
        let checksum = checksum(&canonical_lines(&payload));
        Self { key, payload, checksum }
    }
}

/// How [`Cache::get_or_build`] obtained its entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Built,
    /// A file existed but was stale or corrupt.
    Rebuilt,
}

enum Loaded {
    Missing,
    Invalid(String),
    Ok(CacheEntry),
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    fn read(&self, key: &CacheKey) -> Loaded {
        let path = self.path(key);
        let file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Loaded::Missing,
            Err(e) => return Loaded::Invalid(e.to_string()),
        };
        let mut lines = BufReader::new(file).lines();
        let header: Header = match lines.next() {
            Some(Ok(l)) => match serde_json::from_str(&l) {
                Ok(h) => h,
                Err(e) => return Loaded::Invalid(format!("bad header: {e}")),
            },
            _ => return Loaded::Invalid("missing header".into()),
        };
        if header.version != CACHE_VERSION {
            return Loaded::Invalid(format!("version {} (expected {CACHE_VERSION})", header.version));
        }
        if header.kind != key.kind || header.q != key.q || header.param != key.param || header.variant != key.variant {
            return Loaded::Invalid("key mismatch".into());
        }
        let mut body = Vec::with_capacity(header.records);
        for line in lines {
            match line {
                Ok(l) => body.push(l),
                Err(e) => return Loaded::Invalid(e.to_string()),
            }
        }
        if body.len() != header.records || checksum(&body) != header.checksum {
            return Loaded::Invalid("checksum mismatch".into());
        }
        let mut payload = Vec::with_capacity(body.len());
        for l in &body {
            match serde_json::from_str::<Record>(l) {
                Ok(r) => payload.push(r),
                Err(e) => return Loaded::Invalid(format!("bad record: {e}")),
            }
        }
        Loaded::Ok(CacheEntry { key: key.clone(), payload, checksum: header.checksum })
    }

    /// Writes atomically: a temporary file in the cache directory is renamed into place.
    pub fn store(&self, entry: &CacheEntry) -> CliResult<()> {
        fs::create_dir_all(&self.dir)?;
        let lines = canonical_lines(&entry.payload);
        let header = Header {
            version: CACHE_VERSION,
            kind: entry.key.kind.to_string(),
            q: entry.key.q,
            param: entry.key.param,
            variant: entry.key.variant.clone(),
            records: lines.len(),
            checksum: entry.checksum.clone(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        {
            let mut w = std::io::BufWriter::new(tmp.as_file_mut());
            serde_json::to_writer(&mut w, &header).map_err(std::io::Error::from)?;
            writeln!(w)?;
            for l in &lines {
                writeln!(w, "{l}")?;
            }
            w.flush()?;
        }
        tmp.persist(self.path(&entry.key)).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn get_or_build(
        &self,
        key: &CacheKey,
        build: impl FnOnce() -> CliResult<Vec<Record>>,
    ) -> CliResult<(CacheEntry, CacheStatus)> {
        let status = match self.read(key) {
            Loaded::Ok(e) => return Ok((e, CacheStatus::Hit)),
            Loaded::Missing => CacheStatus::Built,
            Loaded::Invalid(why) => {
                log::warn!("rebuilding cache file {}: {why}", self.path(key).display());
                CacheStatus::Rebuilt
            }
        };
        let entry = CacheEntry::new(key.clone(), build()?);
        self.store(&entry)?;
        Ok((entry, status))
    }
}

/// `--cache-dir` wins over `FFSTAT_CACHE_DIR`; without either nothing is cached.
pub fn resolve_dir(flag: Option<&Path>, env: Option<&str>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> CacheKey {
        CacheKey { kind: "primes", q: 3, param: 2, variant: None }
    }

    fn payload() -> Vec<Record> {
        vec![vec![vec![0, 1]], vec![vec![1, 1]], vec![vec![1, 0, 1]]]
    }

    #[test]
    fn roundtrip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (e, s) = cache.get_or_build(&key(), || Ok(payload())).unwrap();
        assert_eq!(s, CacheStatus::Built);
        let (again, s) = cache.get_or_build(&key(), || panic!("should not rebuild")).unwrap();
        assert_eq!(s, CacheStatus::Hit);
        assert_eq!(again, e);

        let path = cache.path(&key());
        let text = fs::read_to_string(&path).unwrap().replace("[1,0,1]", "[2,0,1]");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.read(&key()), Loaded::Invalid(_)));
        let (fixed, s) = cache.get_or_build(&key(), || Ok(payload())).unwrap();
        assert_eq!(s, CacheStatus::Rebuilt);
        assert_eq!(fixed, e);
    }

    #[test]
    fn stale_version_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        cache.store(&CacheEntry::new(key(), payload())).unwrap();
        let path = cache.path(&key());
        let text = fs::read_to_string(&path).unwrap().replacen("\"version\":1", "\"version\":0", 1);
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.read(&key()), Loaded::Invalid(_)));
    }

    #[test]
    fn flag_beats_environment() {
        let flag = PathBuf::from("/a");
        assert_eq!(resolve_dir(Some(&flag), Some("/b")), Some(flag));
        assert_eq!(resolve_dir(None, Some("/b")), Some(PathBuf::from("/b")));
        assert_eq!(resolve_dir(None, Some("")), None);
    }
}
