//! Append-only JSON-lines store of search outcomes keyed by content hash.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use log::warn;
use posetsat::search::SearchOutcome;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    outcome: SearchOutcome,
}

pub struct Cache {
    path: PathBuf,
    entries: HashMap<String, SearchOutcome>,
}

impl Cache {
    /// Loads every readable line; unreadable ones are skipped with a warning.
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            let text = fs::read_to_string(path).with_context(|| format!("reading cache {}", path.display()))?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<Entry>(line) {
                    Ok(e) => {
                        entries.insert(e.key, e.outcome);
                    }
                    Err(err) => warn!("skipping corrupt cache line {} in {}: {err}", i + 1, path.display()),
                }
            }
        }
        Ok(Cache { path: path.to_path_buf(), entries })
    }

    pub fn get(&self, key: &str) -> Option<&SearchOutcome> {
        self.entries.get(key)
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Appends one line. A torn last line from an earlier crash is closed
    /// off first so the new entry starts on its own line.
    pub fn insert(&mut self, key: String, outcome: SearchOutcome) -> Result<()> {
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening cache {}", self.path.display()))?;
        let mut line = serde_json::to_string(&Entry { key: key.clone(), outcome: outcome.clone() })?;
        line.push('\n');
        let len = file.metadata()?.len();
        if len > 0 {
            let mut last = [0u8];
            file.seek(SeekFrom::Start(len - 1))?;
            file.read_exact(&mut last)?;
            if last[0] != b'\n' {
                line.insert(0, '\n');
            }
        }
        file.write_all(line.as_bytes())?;
        file.flush()?;
        self.entries.insert(key, outcome);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use posetsat::search::{min_ordinary, SearchConfig};
    use posetsat::{CopyMode, Poset};

    fn outcome() -> SearchOutcome {
        let p = Poset::named("C_2").unwrap();
        min_ordinary(2, &p, CopyMode::Strong, SearchConfig::default()).unwrap()
    }

    #[test]
    fn round_trip_and_torn_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let mut cache = Cache::open(&path).unwrap();
        cache.insert("a".into(), outcome()).unwrap();
        // simulate a crash in the middle of a write
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"{\"key\":\"b\",\"outc").unwrap();
        drop(f);
        let mut cache = Cache::open(&path).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.get("a").unwrap().value, Some(1));
        cache.insert("c".into(), outcome()).unwrap();
        let cache = Cache::open(&path).unwrap();
        assert_eq!(cache.len(), 2);
        assert!(cache.get("c").is_some());
    }
}
