//! `termdrift.toml`: paths and service settings. Every key is optional;
//! relative paths resolve against the config file's directory. Command-line
//! flags override the file.
//!
//! ```toml
//! corpus = "data/corpus.jsonl"
//! lexicon = "lexicon.toml"
//! decision_log = "decisions.jsonl"
//! counts = "data/counts.jsonl"
//! candidates = "data/candidates.jsonl"
//! cache = "data/extraction_cache.jsonl"
//! stats_dir = "out/stats"
//! output = "out/figures"
//!
//! [matcher]
//! scope = "body"            # or "abstract"
//!
//! [fetch]
//! endpoint = "https://proceedings.example.org/api"
//! extractor = ["pdftotext", "-layout", "{input}", "-"]
//! timeout_secs = 30
//!
//! [extraction]
//! endpoint = "https://api.example.com/v1/chat/completions"
//! model = "gpt-4"
//! timeout_secs = 60
//!
//! [limits]
//! concurrency = 4
//! retries = 3
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;
use termdrift_core::matcher::ScanScope;

pub const DEFAULT_CONFIG: &str = "termdrift.toml";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ConfigFile {
    corpus: Option<PathBuf>,
    lexicon: Option<PathBuf>,
    decision_log: Option<PathBuf>,
    counts: Option<PathBuf>,
    candidates: Option<PathBuf>,
    cache: Option<PathBuf>,
    stats_dir: Option<PathBuf>,
    output: Option<PathBuf>,
    matcher: MatcherSection,
    fetch: FetchSection,
    extraction: ExtractionSection,
    limits: LimitsSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct MatcherSection {
    scope: ScanScope,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FetchSection {
    endpoint: Option<String>,
    extractor: Option<Vec<String>>,
    timeout_secs: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ExtractionSection {
    endpoint: Option<String>,
    model: Option<String>,
    timeout_secs: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct LimitsSection {
    concurrency: Option<usize>,
    retries: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub corpus: PathBuf,
    pub lexicon: PathBuf,
    pub decision_log: PathBuf,
    pub counts: PathBuf,
    pub candidates: PathBuf,
    pub cache: PathBuf,
    pub stats_dir: PathBuf,
    pub output: PathBuf,
    pub scan_scope: ScanScope,
    pub fetch_endpoint: Option<String>,
    pub extractor_command: Option<Vec<String>>,
    pub fetch_timeout_secs: u64,
    pub extraction_endpoint: Option<String>,
    pub extraction_model: Option<String>,
    pub extraction_timeout_secs: u64,
    pub concurrency: usize,
    pub retries: u32,
}

impl Config {
    /// Reads `path`, or `termdrift.toml` in the working directory when no
    /// path is given and that file exists.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let (file, base) = match path {
            Some(p) => (
                Some(p.to_path_buf()),
                p.parent().map(Path::to_path_buf).unwrap_or_default(),
            ),
            None if Path::new(DEFAULT_CONFIG).exists() => (Some(PathBuf::from(DEFAULT_CONFIG)), PathBuf::new()),
            None => (None, PathBuf::new()),
        };
        let raw = match &file {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                toml::from_str::<ConfigFile>(&text).with_context(|| format!("invalid config {}", p.display()))?
            }
            None => ConfigFile::default(),
        };
        let at = |p: Option<PathBuf>, default: &str| {
            let p = p.unwrap_or_else(|| PathBuf::from(default));
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        Ok(Self {
            corpus: at(raw.corpus, "corpus.jsonl"),
            lexicon: at(raw.lexicon, "lexicon.toml"),
            decision_log: at(raw.decision_log, "decisions.jsonl"),
            counts: at(raw.counts, "counts.jsonl"),
            candidates: at(raw.candidates, "candidates.jsonl"),
            cache: at(raw.cache, "extraction_cache.jsonl"),
            stats_dir: at(raw.stats_dir, "stats"),
            output: at(raw.output, "figures"),
            scan_scope: raw.matcher.scope,
            fetch_endpoint: raw.fetch.endpoint,
            extractor_command: raw.fetch.extractor,
            fetch_timeout_secs: raw.fetch.timeout_secs.unwrap_or(30),
            extraction_endpoint: raw.extraction.endpoint,
            extraction_model: raw.extraction.model,
            extraction_timeout_secs: raw.extraction.timeout_secs.unwrap_or(60),
            concurrency: raw.limits.concurrency.unwrap_or(4).max(1),
            retries: raw.limits.retries.unwrap_or(3),
        })
    }
}
