//! Shared verdict cache keyed by canonical form and search policy.
//!
//! Any number of threads may read and insert concurrently. Inserting a key
//! that is already present is a no-op, and a lost insert only costs a
//! recomputation. When backed by a file, each new verdict is appended as one
//! line `<canonical-key hex> <policy tag> <0|1>` with a single write.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use dashmap::DashMap;
use thiserror::Error;

use crate::canon::CanonicalKey;
use crate::contract::MoveSet;

/// Environment variable consulted when no cache path is given.
pub const CACHE_ENV: &str = "CONTRACT_CACHE";

/// Which deletions are allowed and how much gluing budget remains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolicyTag {
    pub moves: MoveSet,
    pub glue_budget: u32,
}

impl fmt::Display for PolicyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/g{}", self.moves, self.glue_budget)
    }
}

impl FromStr for PolicyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (moves, budget) = s.split_once("/g").ok_or_else(|| format!("bad policy tag `{s}`"))?;
        Ok(PolicyTag {
            moves: moves.parse()?,
            glue_budget: budget.parse().map_err(|_| format!("bad glue budget in `{s}`"))?,
        })
    }
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache file {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("cache file line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("cache file line {line}: verdict for {key} under {tag} contradicts an earlier record")]
    Conflict { line: usize, key: String, tag: PolicyTag },
}

#[derive(Default)]
pub struct MemoCache {
    map: DashMap<(CanonicalKey, PolicyTag), bool>,
    sink: Option<Mutex<File>>,
}

impl fmt::Debug for MemoCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MemoCache")
            .field("entries", &self.map.len())
            .field("persistent", &self.sink.is_some())
            .finish()
    }
}

impl MemoCache {
    /// In-memory cache.
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads every record of `path` (creating the file if needed) and
    /// appends new verdicts to it. An unterminated final line, left by an
    /// interrupted append, is ignored.
    pub fn open(path: &Path) -> Result<Self, CacheError> {
        let io_err = |source| CacheError::Io { path: path.display().to_string(), source };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(io_err(e)),
        };
        let cache = MemoCache::new();
        let complete = match text.rfind('\n') {
            Some(i) => &text[..=i],
            None => "",
        };
        for (i, line) in complete.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |msg: &str| CacheError::Malformed { line: line_no, msg: msg.into() };
            let mut fields = line.split_whitespace();
            let (Some(key), Some(tag), Some(verdict), None) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(malformed("expected `<key> <policy> <0|1>`"));
            };
            let key = CanonicalKey::from_hex(key).ok_or_else(|| malformed("bad canonical key"))?;
            let tag: PolicyTag = tag.parse().map_err(|e: String| malformed(&e))?;
            let verdict = match verdict {
                "0" => false,
                "1" => true,
                _ => return Err(malformed("verdict must be 0 or 1")),
            };
            if let Some(old) = cache.map.insert((key.clone(), tag), verdict) {
                if old != verdict {
                    return Err(CacheError::Conflict { line: line_no, key: key.to_hex(), tag });
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
        Ok(MemoCache { map: cache.map, sink: Some(Mutex::new(file)) })
    }

    pub fn get(&self, key: &CanonicalKey, tag: PolicyTag) -> Option<bool> {
        self.map.get(&(key.clone(), tag)).map(|v| *v)
    }

    pub fn insert(&self, key: CanonicalKey, tag: PolicyTag, verdict: bool) {
        use dashmap::mapref::entry::Entry;
        match self.map.entry((key, tag)) {
            Entry::Occupied(e) => {
                debug_assert_eq!(*e.get(), verdict, "cache verdicts are immutable");
            }
            Entry::Vacant(e) => {
                let line = format!("{} {} {}\n", e.key().0.to_hex(), tag, verdict as u8);
                e.insert(verdict);
                if let Some(sink) = &self.sink {
                    // A failed append only loses a cache entry.
                    if let Ok(mut f) = sink.lock() {
                        let _ = f.write_all(line.as_bytes());
                    }
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
