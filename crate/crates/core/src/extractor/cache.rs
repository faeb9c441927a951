use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::jsonl::{self, JsonlError};

pub const CACHE_KIND: &str = "extraction-cache";
pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CachedResponse {
    paper_id: String,
    response: String,
}

/// Raw service responses keyed by paper_id, persisted append-only.
#[derive(Debug)]
pub struct ResponseCache {
    path: PathBuf,
    inner: Mutex<CacheState>,
}

#[derive(Debug)]
struct CacheState {
    file: File,
    entries: BTreeMap<String, String>,
}

impl ResponseCache {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, JsonlError> {
        let path = path.as_ref().to_path_buf();
        let io = |source| JsonlError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut entries = BTreeMap::new();
        if path.exists() {
            for r in jsonl::read::<CachedResponse>(&path, CACHE_KIND, CACHE_SCHEMA_VERSION)? {
                entries.insert(r.paper_id, r.response);
            }
        } else {
            std::fs::write(
                &path,
                jsonl::to_string::<CachedResponse>(CACHE_KIND, CACHE_SCHEMA_VERSION, &[]),
            )
            .map_err(io)?;
        }
        let file = OpenOptions::new().append(true).open(&path).map_err(io)?;
        Ok(Self {
            path,
            inner: Mutex::new(CacheState { file, entries }),
        })
    }

    pub fn get(&self, paper_id: &str) -> Option<String> {
        self.inner.lock().unwrap().entries.get(paper_id).cloned()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn insert(&self, paper_id: &str, response: &str) -> Result<(), JsonlError> {
        let mut state = self.inner.lock().unwrap();
        let mut line = serde_json::to_string(&CachedResponse {
            paper_id: paper_id.to_string(),
            response: response.to_string(),
        })
        .expect("cache record serializes");
        line.push('\n');
        state.file.write_all(line.as_bytes()).map_err(|source| JsonlError::Io {
            path: self.path.display().to_string(),
            source,
        })?;
        state.entries.insert(paper_id.to_string(), response.to_string());
        Ok(())
    }
}
