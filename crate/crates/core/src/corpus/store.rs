use std::path::Path;

use super::{Corpus, CorpusError, Paper};
use crate::jsonl;

pub const CORPUS_KIND: &str = "corpus";
pub const CORPUS_SCHEMA_VERSION: u32 = 1;

pub fn to_store_string(corpus: &Corpus) -> String {
    jsonl::to_string(CORPUS_KIND, CORPUS_SCHEMA_VERSION, corpus.papers())
}

/// One header line, then one paper per line.
pub fn store(corpus: &Corpus, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    Ok(jsonl::write(
        path.as_ref(),
        CORPUS_KIND,
        CORPUS_SCHEMA_VERSION,
        corpus.papers(),
    )?)
}

pub fn load(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let papers: Vec<Paper> = jsonl::read(path.as_ref(), CORPUS_KIND, CORPUS_SCHEMA_VERSION)?;
    Corpus::new(papers)
}
