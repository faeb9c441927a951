//! Paper metadata, post-processed body text, and the on-disk corpus store.

mod body;
mod fetch;
mod from_text;
mod store;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use body::{extract_body, BodyExtraction, ExtractionOptions, ExtractionWarning};
pub use fetch::{
    fetch_metadata, fetch_papers, CommandTextSource, FetchError, FetchPolicy, HttpTextSource, MetadataClient,
    TextSource, VolumeListing,
};
pub use from_text::{ingest_text_dir, TextIngest};
pub use store::{load, store, to_store_string, CORPUS_KIND, CORPUS_SCHEMA_VERSION};

use crate::jsonl::JsonlError;

/// Venues the metadata endpoint is expected to know about.
pub const KNOWN_VENUES: [&str; 6] = ["ACL", "EMNLP", "NAACL", "EACL", "AACL", "COLING"];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("paper_id must not be empty")]
    EmptyId,
    #[error("duplicate paper_id {0:?}")]
    DuplicateId(String),
    #[error("{venue} {year}: papers disagree on ordinal")]
    OrdinalMismatch { venue: String, year: i32 },
    #[error("ordinal {ordinal} ({venue} {year}) is out of chronological order")]
    OrdinalOrder { ordinal: u32, venue: String, year: i32 },
    #[error("paper {paper_id}: section offset {offset} outside body of length {len}")]
    SectionOffset {
        paper_id: String,
        offset: usize,
        len: usize,
    },
    #[error(transparent)]
    Store(#[from] JsonlError),
    #[error("{path}: {message}")]
    Input { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperMeta {
    pub paper_id: String,
    pub venue: String,
    pub year: i32,
    /// Chronological position of the conference within the corpus.
    pub ordinal: u32,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_url: Option<String>,
}

impl PaperMeta {
    pub fn conference(&self) -> ConferenceKey {
        ConferenceKey {
            venue: self.venue.clone(),
            year: self.year,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paper {
    #[serde(flatten)]
    pub meta: PaperMeta,
    pub body_text: String,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConferenceKey {
    pub venue: String,
    pub year: i32,
}

impl ConferenceKey {
    pub fn new(venue: impl Into<String>, year: i32) -> Self {
        Self {
            venue: venue.into(),
            year,
        }
    }
}

impl fmt::Display for ConferenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.venue, self.year)
    }
}

/// Orders venues within a year. Venues absent from the table sort after
/// listed ones, alphabetically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VenueOrder {
    default: Vec<String>,
    per_year: BTreeMap<i32, Vec<String>>,
}

impl Default for VenueOrder {
    fn default() -> Self {
        Self {
            default: ["EACL", "NAACL", "ACL", "AACL", "COLING", "EMNLP"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            per_year: BTreeMap::new(),
        }
    }
}

impl VenueOrder {
    pub fn with_year(mut self, year: i32, venues: Vec<String>) -> Self {
        self.per_year.insert(year, venues);
        self
    }

    fn rank(&self, key: &ConferenceKey) -> (i32, usize, String) {
        let list = self.per_year.get(&key.year).unwrap_or(&self.default);
        let pos = list
            .iter()
            .position(|v| v.eq_ignore_ascii_case(&key.venue))
            .unwrap_or(list.len());
        (key.year, pos, key.venue.clone())
    }
}

/// An immutable, validated set of papers grouped by conference.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    papers: Vec<Paper>,
    conference_index: BTreeMap<ConferenceKey, Vec<String>>,
}

impl Corpus {
    /// Validates papers whose ordinals are already set.
    pub fn new(mut papers: Vec<Paper>) -> Result<Self, CorpusError> {
        let mut ids = HashSet::new();
        let mut ordinals: BTreeMap<ConferenceKey, u32> = BTreeMap::new();
        for p in &papers {
            if p.meta.paper_id.is_empty() {
                return Err(CorpusError::EmptyId);
            }
            if !ids.insert(p.meta.paper_id.as_str()) {
                return Err(CorpusError::DuplicateId(p.meta.paper_id.clone()));
            }
            let prev = *ordinals.entry(p.meta.conference()).or_insert(p.meta.ordinal);
            if prev != p.meta.ordinal {
                return Err(CorpusError::OrdinalMismatch {
                    venue: p.meta.venue.clone(),
                    year: p.meta.year,
                });
            }
            if let Some(s) = p.sections.iter().find(|s| s.offset >= p.body_text.len()) {
                return Err(CorpusError::SectionOffset {
                    paper_id: p.meta.paper_id.clone(),
                    offset: s.offset,
                    len: p.body_text.len(),
                });
            }
        }
        let mut by_ordinal: Vec<(u32, &ConferenceKey)> = ordinals.iter().map(|(k, o)| (*o, k)).collect();
        by_ordinal.sort();
        for w in by_ordinal.windows(2) {
            if w[0].0 == w[1].0 || w[0].1.year > w[1].1.year {
                return Err(CorpusError::OrdinalOrder {
                    ordinal: w[1].0,
                    venue: w[1].1.venue.clone(),
                    year: w[1].1.year,
                });
            }
        }
        papers.sort_by(|a, b| (a.meta.ordinal, &a.meta.paper_id).cmp(&(b.meta.ordinal, &b.meta.paper_id)));
        let mut conference_index: BTreeMap<ConferenceKey, Vec<String>> = BTreeMap::new();
        for p in &papers {
            conference_index
                .entry(p.meta.conference())
                .or_default()
                .push(p.meta.paper_id.clone());
        }
        Ok(Self {
            papers,
            conference_index,
        })
    }

    /// Assigns ordinals from `order` (ignoring whatever the papers carry),
    /// then validates.
    pub fn with_ordinals(mut papers: Vec<Paper>, order: &VenueOrder) -> Result<Self, CorpusError> {
        let keys: BTreeSet<ConferenceKey> = papers.iter().map(|p| p.meta.conference()).collect();
        let mut ranked: Vec<_> = keys.into_iter().collect();
        ranked.sort_by_key(|k| order.rank(k));
        let ordinal: BTreeMap<ConferenceKey, u32> =
            ranked.into_iter().enumerate().map(|(i, k)| (k, i as u32)).collect();
        for p in &mut papers {
            p.meta.ordinal = ordinal[&p.meta.conference()];
        }
        Self::new(papers)
    }

    /// Replaces every paper of the conferences present in `incoming`, keeps
    /// the rest, and renumbers ordinals.
    pub fn merged(&self, incoming: Vec<Paper>, order: &VenueOrder) -> Result<Self, CorpusError> {
        let replaced: BTreeSet<ConferenceKey> = incoming.iter().map(|p| p.meta.conference()).collect();
        let mut papers: Vec<Paper> = self
            .papers
            .iter()
            .filter(|p| !replaced.contains(&p.meta.conference()))
            .cloned()
            .collect();
        papers.extend(incoming);
        Self::with_ordinals(papers, order)
    }

    pub fn papers(&self) -> &[Paper] {
        &self.papers
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn conference_index(&self) -> &BTreeMap<ConferenceKey, Vec<String>> {
        &self.conference_index
    }

    pub fn paper(&self, paper_id: &str) -> Option<&Paper> {
        self.papers.iter().find(|p| p.meta.paper_id == paper_id)
    }

    /// Conferences in chronological order with their ordinal.
    pub fn conferences(&self) -> Vec<(u32, ConferenceKey)> {
        let mut out: Vec<(u32, ConferenceKey)> = Vec::new();
        for p in &self.papers {
            if out.last().map(|(o, _)| *o) != Some(p.meta.ordinal) {
                out.push((p.meta.ordinal, p.meta.conference()));
            }
        }
        out
    }
}
