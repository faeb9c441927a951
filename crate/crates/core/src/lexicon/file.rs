//! Canonical lexicon file: TOML, one `[[entry]]` block per model.
//!
//! ```toml
//! schema_version = 1
//!
//! [l_terms]
//! terms = ["language model", "LLM", "PLM"]
//!
//! [[entry]]
//! name = "RoBERTa"
//! aliases = ["RoBERTa"]
//! variations = ["RoBERTa-large"]
//! parent = "BERT"
//! ```
//!
//! `aliases` defaults to `[name]`; `variations` and `parent` are optional.
//! Unknown keys are rejected.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LTermSet, Lexicon, LexiconError, ModelEntry};

pub const LEXICON_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    schema_version: u32,
    #[serde(default)]
    l_terms: Option<TermsBlock>,
    #[serde(default, rename = "entry", skip_serializing_if = "Vec::is_empty")]
    entries: Vec<EntryBlock>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermsBlock {
    terms: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryBlock {
    name: String,
    #[serde(default)]
    aliases: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    variations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<String>,
}

pub fn parse_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| LexiconError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_lexicon_str(&text).map_err(|e| LexiconError::Located {
        location: path.display().to_string(),
        source: Box::new(e),
    })
}

pub fn parse_lexicon_str(text: &str) -> Result<Lexicon, LexiconError> {
    let file: LexiconFile = toml::from_str(text).map_err(|e| LexiconError::Syntax {
        location: e
            .span()
            .map(|s| format!("line {}", line_of(text, s.start)))
            .unwrap_or_else(|| "lexicon".to_string()),
        message: e.message().to_string(),
    })?;
    if file.schema_version != LEXICON_SCHEMA_VERSION {
        return Err(LexiconError::SchemaVersion(file.schema_version));
    }
    let l_terms = match file.l_terms {
        Some(block) => LTermSet::new(block.terms)?,
        None => LTermSet::default(),
    };
    let entries = file
        .entries
        .into_iter()
        .map(|b| {
            let aliases = if b.aliases.is_empty() {
                vec![b.name.clone()]
            } else {
                b.aliases
            };
            ModelEntry {
                entry_id: b.name,
                aliases,
                variations: b.variations,
                parent: b.parent,
            }
        })
        .collect();
    Lexicon::new(l_terms, entries)
}

pub fn write_lexicon_string(lexicon: &Lexicon) -> String {
    let (l_terms, entries) = lexicon.clone().into_parts();
    let file = LexiconFile {
        schema_version: LEXICON_SCHEMA_VERSION,
        l_terms: Some(TermsBlock {
            terms: l_terms.terms().to_vec(),
        }),
        entries: entries
            .into_iter()
            .map(|e| EntryBlock {
                name: e.entry_id,
                aliases: e.aliases,
                variations: e.variations,
                parent: e.parent,
            })
            .collect(),
    };
    toml::to_string(&file).expect("lexicon serializes")
}

/// Writes via a temp file and rename so readers never see a partial file.
pub fn write_lexicon(lexicon: &Lexicon, path: impl AsRef<Path>) -> Result<(), LexiconError> {
    let path = path.as_ref();
    let io = |e: std::io::Error| LexiconError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let tmp = path.with_extension("toml.tmp");
    fs::write(&tmp, write_lexicon_string(lexicon)).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}
