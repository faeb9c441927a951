//! Line-delimited JSON files with a leading header record.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonlError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed { path: String, line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub kind: String,
    pub schema_version: u32,
}

/// Serializes a header line plus one line per record.
pub fn to_string<T: Serialize>(kind: &str, schema_version: u32, records: &[T]) -> String {
    let mut out = serde_json::to_string(&Header {
        kind: kind.to_string(),
        schema_version,
    })
    .expect("header serializes");
    out.push('\n');
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn write<T: Serialize>(path: &Path, kind: &str, schema_version: u32, records: &[T]) -> Result<(), JsonlError> {
    let io = |source| JsonlError::Io {
        path: path.display().to_string(),
        source,
    };
    write_atomic(path, to_string(kind, schema_version, records).as_bytes()).map_err(io)
}

/// Writes through a sibling temp file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    let tmp = path.with_file_name(name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Parses text produced by [`to_string`]. Line numbers in errors are 1-based.
pub fn from_str<T: DeserializeOwned>(
    text: &str,
    origin: &str,
    kind: &str,
    schema_version: u32,
) -> Result<Vec<T>, JsonlError> {
    let bad = |line: usize, message: String| JsonlError::Malformed {
        path: origin.to_string(),
        line,
        message,
    };
    let mut lines = text.split('\n').enumerate();
    let header: Header = match lines.next() {
        Some((_, l)) if !l.trim().is_empty() => {
            serde_json::from_str(l).map_err(|e| bad(1, format!("bad header: {e}")))?
        }
        _ => return Err(bad(1, "missing header record".into())),
    };
    if header.kind != kind {
        return Err(bad(1, format!("expected a {kind:?} file, found {:?}", header.kind)));
    }
    if header.schema_version != schema_version {
        return Err(bad(1, format!("unsupported schema version {}", header.schema_version)));
    }
    let mut out = Vec::new();
    for (i, l) in lines {
        if l.is_empty() {
            continue;
        }
        out.push(serde_json::from_str(l).map_err(|e| bad(i + 1, e.to_string()))?);
    }
    Ok(out)
}

pub fn read<T: DeserializeOwned>(path: &Path, kind: &str, schema_version: u32) -> Result<Vec<T>, JsonlError> {
    let text = fs::read_to_string(path).map_err(|source| JsonlError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_str(&text, &path.display().to_string(), kind, schema_version)
}
