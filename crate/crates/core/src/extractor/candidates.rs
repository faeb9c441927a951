use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::jsonl::{self, JsonlError};
use crate::lexicon::TriageDecision;

pub const CANDIDATES_KIND: &str = "candidates";
pub const CANDIDATES_SCHEMA_VERSION: u32 = 1;
const MAX_EXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", content = "decision", rename_all = "snake_case")]
pub enum CandidateStatus {
    Pending,
    Decided(TriageDecision),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateName {
    pub surface: String,
    /// Number of abstracts the name was returned for.
    pub frequency: u64,
    pub example_paper_ids: Vec<String>,
    pub status: CandidateStatus,
}

/// Merges per-paper name lists by exact surface string and ranks them by
/// frequency (descending), then surface. Independent of input order.
pub fn aggregate_candidates<'a, I>(responses: I) -> Vec<CandidateName>
where
    I: IntoIterator<Item = (&'a str, &'a [String])>,
{
    let mut papers_by_name: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (paper_id, names) in responses {
        for name in names {
            let name = name.trim();
            if !name.is_empty() {
                papers_by_name.entry(name).or_default().insert(paper_id);
            }
        }
    }
    let mut out: Vec<CandidateName> = papers_by_name
        .into_iter()
        .map(|(surface, papers)| CandidateName {
            surface: surface.to_string(),
            frequency: papers.len() as u64,
            example_paper_ids: papers.iter().take(MAX_EXAMPLES).map(|s| s.to_string()).collect(),
            status: CandidateStatus::Pending,
        })
        .collect();
    out.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.surface.cmp(&b.surface)));
    out
}

pub fn write_candidates(path: &Path, candidates: &[CandidateName]) -> Result<(), JsonlError> {
    jsonl::write(path, CANDIDATES_KIND, CANDIDATES_SCHEMA_VERSION, candidates)
}

pub fn read_candidates(path: &Path) -> Result<Vec<CandidateName>, JsonlError> {
    jsonl::read(path, CANDIDATES_KIND, CANDIDATES_SCHEMA_VERSION)
}
