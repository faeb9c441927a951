//! Metadata endpoint client and raw-text adapters.
//!
//! Endpoint layout (JSON unless noted):
//!
//! * `GET {base}/volumes/{venue}/{year}` returns a [`VolumeListing`]; 404 when
//!   the volume does not exist.
//! * `GET {base}/papers/{paper_id}/text` returns the paper's raw page text as
//!   `text/plain`, pages separated by form feeds.

use std::io::Read;
use std::path::PathBuf;
use std::process::Command;
use std::thread;
use std::time::Duration;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{extract_body, ExtractionOptions, ExtractionWarning, Paper, PaperMeta};

/// The earliest year any proceedings volume can have.
const FIRST_PROCEEDINGS_YEAR: i32 = 1952;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("{venue} {year}: no such proceedings volume")]
    NotFound { venue: String, year: i32 },
    #[error("{context}: network error (retryable): {message}")]
    Network { context: String, message: String },
    #[error("{context}: service returned HTTP {status}")]
    Status { context: String, status: u16 },
    #[error("{context}: malformed response: {message}")]
    Decode { context: String, message: String },
    #[error("{context}: text extractor failed: {message}")]
    Extractor { context: String, message: String },
}

impl FetchError {
    pub fn is_retryable(&self) -> bool {
        match self {
            FetchError::Network { .. } => true,
            FetchError::Status { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FetchPolicy {
    pub concurrency: usize,
    pub retries: u32,
    pub backoff: Duration,
    pub timeout: Duration,
}

impl Default for FetchPolicy {
    fn default() -> Self {
        Self {
            concurrency: 4,
            retries: 3,
            backoff: Duration::from_millis(250),
            timeout: Duration::from_secs(30),
        }
    }
}

impl FetchPolicy {
    /// Runs `op`, retrying retryable failures with jittered exponential backoff.
    pub fn run<T>(&self, mut op: impl FnMut() -> Result<T, FetchError>) -> Result<T, FetchError> {
        let mut attempt = 0;
        loop {
            match op() {
                Err(e) if e.is_retryable() && attempt < self.retries => {
                    let base = self.backoff.as_millis() as u64 * (1 << attempt.min(6));
                    let jitter = rand::thread_rng().gen_range(0..=base / 2 + 1);
                    thread::sleep(Duration::from_millis(base + jitter));
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeListing {
    pub venue: String,
    pub year: i32,
    pub papers: Vec<ListedPaper>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListedPaper {
    pub paper_id: String,
    pub title: String,
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
    #[serde(default)]
    pub source_url: Option<String>,
}

#[derive(Debug, Clone)]
pub struct MetadataClient {
    base_url: String,
    agent: ureq::Agent,
    policy: FetchPolicy,
}

impl MetadataClient {
    pub fn new(base_url: impl Into<String>, policy: FetchPolicy) -> Self {
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            agent: ureq::AgentBuilder::new().timeout(policy.timeout).build(),
            policy,
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    pub fn policy(&self) -> FetchPolicy {
        self.policy
    }

    fn get(&self, url: &str, context: &str) -> Result<ureq::Response, FetchError> {
        self.agent.get(url).call().map_err(|e| match e {
            ureq::Error::Status(status, _) => FetchError::Status {
                context: context.to_string(),
                status,
            },
            ureq::Error::Transport(t) => FetchError::Network {
                context: context.to_string(),
                message: t.to_string(),
            },
        })
    }
}

/// Lists the main-proceedings papers of one volume, ordered by paper_id.
/// Ordinals are left at 0; the corpus assigns them.
pub fn fetch_metadata(client: &MetadataClient, venue: &str, year: i32) -> Result<Vec<PaperMeta>, FetchError> {
    let not_found = || FetchError::NotFound {
        venue: venue.to_string(),
        year,
    };
    if year < FIRST_PROCEEDINGS_YEAR {
        return Err(not_found());
    }
    let context = format!("{venue} {year}");
    let url = format!("{}/volumes/{venue}/{year}", client.base_url);
    let listing: VolumeListing = client.policy.run(|| {
        let resp = client.get(&url, &context).map_err(|e| match e {
            FetchError::Status { status: 404, .. } => not_found(),
            e => e,
        })?;
        resp.into_json().map_err(|e| FetchError::Decode {
            context: context.clone(),
            message: e.to_string(),
        })
    })?;
    let mut metas: Vec<PaperMeta> = listing
        .papers
        .into_iter()
        .map(|p| PaperMeta {
            paper_id: p.paper_id,
            venue: venue.to_string(),
            year,
            ordinal: 0,
            title: p.title,
            abstract_text: p.abstract_text,
            source_url: p.source_url,
        })
        .collect();
    metas.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
    Ok(metas)
}

/// Produces raw page text for a paper. PDF conversion lives behind this.
pub trait TextSource: Sync {
    fn raw_text(&self, meta: &PaperMeta) -> Result<String, FetchError>;
}

/// Reads pre-extracted text from the metadata endpoint.
#[derive(Debug, Clone)]
pub struct HttpTextSource {
    client: MetadataClient,
}

impl HttpTextSource {
    pub fn new(client: MetadataClient) -> Self {
        Self { client }
    }
}

impl TextSource for HttpTextSource {
    fn raw_text(&self, meta: &PaperMeta) -> Result<String, FetchError> {
        let url = format!("{}/papers/{}/text", self.client.base_url, meta.paper_id);
        let context = meta.paper_id.clone();
        self.client.policy.run(|| {
            self.client
                .get(&url, &context)?
                .into_string()
                .map_err(|e| FetchError::Decode {
                    context: context.clone(),
                    message: e.to_string(),
                })
        })
    }
}

/// Downloads `source_url` and pipes it through an external extractor
/// command. `{input}` in `args` is replaced by the downloaded file path; the
/// command's stdout is the raw text.
#[derive(Debug, Clone)]
pub struct CommandTextSource {
    pub program: String,
    pub args: Vec<String>,
    pub scratch_dir: PathBuf,
    client: MetadataClient,
}

impl CommandTextSource {
    pub fn new(program: String, args: Vec<String>, scratch_dir: PathBuf, client: MetadataClient) -> Self {
        Self {
            program,
            args,
            scratch_dir,
            client,
        }
    }
}

impl TextSource for CommandTextSource {
    fn raw_text(&self, meta: &PaperMeta) -> Result<String, FetchError> {
        let context = meta.paper_id.clone();
        let url = meta.source_url.as_deref().ok_or_else(|| FetchError::Extractor {
            context: context.clone(),
            message: "paper has no source_url".into(),
        })?;
        let bytes = self.client.policy.run(|| {
            let mut buf = Vec::new();
            self.client
                .get(url, &context)?
                .into_reader()
                .read_to_end(&mut buf)
                .map_err(|e| FetchError::Network {
                    context: context.clone(),
                    message: e.to_string(),
                })?;
            Ok(buf)
        })?;
        let ext_err = |message: String| FetchError::Extractor {
            context: context.clone(),
            message,
        };
        let file = self
            .scratch_dir
            .join(format!("{}.pdf", meta.paper_id.replace(['/', '\\'], "_")));
        std::fs::write(&file, bytes).map_err(|e| ext_err(e.to_string()))?;
        let args: Vec<String> = self
            .args
            .iter()
            .map(|a| a.replace("{input}", &file.display().to_string()))
            .collect();
        let out = Command::new(&self.program)
            .args(&args)
            .output()
            .map_err(|e| ext_err(e.to_string()));
        let _ = std::fs::remove_file(&file);
        let out = out?;
        if !out.status.success() {
            return Err(ext_err(String::from_utf8_lossy(&out.stderr).trim().to_string()));
        }
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    }
}

/// Fetches and post-processes every paper with bounded concurrency.
/// Output keeps the input order.
pub fn fetch_papers(
    metas: Vec<PaperMeta>,
    source: &dyn TextSource,
    options: &ExtractionOptions,
    concurrency: usize,
) -> Result<Vec<(Paper, Vec<ExtractionWarning>)>, FetchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(concurrency.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        metas
            .into_par_iter()
            .map(|meta| {
                let raw = source.raw_text(&meta)?;
                let out = extract_body(&raw, options);
                Ok((
                    Paper {
                        meta,
                        body_text: out.body_text,
                        sections: out.sections,
                    },
                    out.warnings,
                ))
            })
            .collect()
    })
}
