//! LLM-assisted candidate extraction for lexicon curation.
//!
//! One request per paper abstract; responses are cached by paper_id so reruns
//! only contact the service for papers it has not answered yet. Names are
//! merged by exact surface string and ranked by how many abstracts returned
//! them.

mod cache;
mod candidates;
mod client;
mod prompt;
mod suggest;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;
use std::time::Duration;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::Paper;
use crate::jsonl::JsonlError;

pub use cache::{ResponseCache, CACHE_KIND};
pub use candidates::{
    aggregate_candidates, read_candidates, write_candidates, CandidateName, CandidateStatus, CANDIDATES_KIND,
};
pub use client::{ChatBackend, ChatClient, API_KEY_ENV};
pub use prompt::{build_prompt, parse_response, ExtractionRequest, SYSTEM_PROMPT};
pub use suggest::{suggest_classification, Suggestion};

#[derive(Debug, Error)]
pub enum ExtractorError {
    #[error("paper {0:?}: abstract is empty")]
    EmptyAbstract(String),
    #[error("API credential missing: set {0}")]
    MissingCredential(&'static str),
    #[error(transparent)]
    Cache(#[from] JsonlError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ServiceError {
    pub message: String,
    pub retryable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractionLimits {
    pub concurrency: usize,
    pub retries: u32,
    pub backoff: Duration,
}

impl Default for ExtractionLimits {
    fn default() -> Self {
        Self {
            concurrency: 4,
            retries: 3,
            backoff: Duration::from_millis(500),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionFailure {
    pub paper_id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtractionRun {
    pub candidates: Vec<CandidateName>,
    /// Papers whose request failed after all retries.
    pub failures: Vec<ExtractionFailure>,
    /// Papers with no abstract to send.
    pub skipped: Vec<String>,
    pub service_calls: usize,
}

fn call_with_retries(
    backend: &dyn ChatBackend,
    request: &ExtractionRequest,
    limits: &ExtractionLimits,
    calls: &AtomicUsize,
) -> Result<String, ServiceError> {
    let mut attempt = 0;
    loop {
        calls.fetch_add(1, Ordering::Relaxed);
        match backend.complete(request) {
            Err(e) if e.retryable && attempt < limits.retries => {
                let base = limits.backoff.as_millis() as u64 * (1 << attempt.min(6));
                let jitter = rand::thread_rng().gen_range(0..=base / 2 + 1);
                thread::sleep(Duration::from_millis(base + jitter));
                attempt += 1;
            }
            other => return other,
        }
    }
}

/// Runs extraction over `papers` and aggregates the candidate list.
///
/// Per-paper failures are recorded and skipped; the run always completes.
/// Cache writes failing aborts the run.
pub fn run_extraction(
    papers: &[Paper],
    backend: &dyn ChatBackend,
    cache: &ResponseCache,
    limits: &ExtractionLimits,
) -> Result<ExtractionRun, ExtractorError> {
    let calls = AtomicUsize::new(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(limits.concurrency.max(1))
        .build()
        .expect("thread pool");

    enum Outcome {
        Names(Vec<String>),
        Skipped,
        Failed(String),
    }

    let outcomes: Vec<(String, Outcome)> = pool.install(|| {
        papers
            .par_iter()
            .map(|p| {
                let id = p.meta.paper_id.clone();
                if let Some(raw) = cache.get(&id) {
                    return Ok((id, Outcome::Names(parse_response(&raw))));
                }
                let request = match build_prompt(&p.meta.title, &p.meta.abstract_text) {
                    Ok(r) => r,
                    Err(_) => return Ok((id, Outcome::Skipped)),
                };
                match call_with_retries(backend, &request, limits, &calls) {
                    Ok(raw) => {
                        cache.insert(&id, &raw)?;
                        Ok((id, Outcome::Names(parse_response(&raw))))
                    }
                    Err(e) => Ok((id, Outcome::Failed(e.message))),
                }
            })
            .collect::<Result<_, ExtractorError>>()
    })?;

    let mut run = ExtractionRun {
        service_calls: calls.load(Ordering::Relaxed),
        ..ExtractionRun::default()
    };
    let mut answered = Vec::new();
    for (id, outcome) in outcomes {
        match outcome {
            Outcome::Names(n) => answered.push((id, n)),
            Outcome::Skipped => run.skipped.push(id),
            Outcome::Failed(message) => run.failures.push(ExtractionFailure { paper_id: id, message }),
        }
    }
    run.candidates = aggregate_candidates(answered.iter().map(|(id, n)| (id.as_str(), n.as_slice())));
    run.skipped.sort();
    run.failures.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
    Ok(run)
}
