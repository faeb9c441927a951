use std::collections::HashMap;
use std::time::Duration;

use anyhow::anyhow;
use clap::Args;
use termdrift_core::corpus;
use termdrift_core::extractor::{
    read_candidates, run_extraction, write_candidates, CandidateStatus, ChatClient, ExtractionLimits, ResponseCache,
};

use crate::config::Config;
use crate::error::{CliError, ResultExt};

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Chat-completion endpoint (overrides the config).
    #[arg(long, value_name = "URL")]
    endpoint: Option<String>,
    /// Model name sent with each request (overrides the config).
    #[arg(long)]
    model: Option<String>,
}

pub fn run(config: &Config, args: ExtractArgs) -> Result<(), CliError> {
    let endpoint = args
        .endpoint
        .or_else(|| config.extraction_endpoint.clone())
        .ok_or_else(|| CliError::usage(anyhow!("no endpoint: pass --endpoint or set [extraction] endpoint")))?;
    let model = args
        .model
        .or_else(|| config.extraction_model.clone())
        .ok_or_else(|| CliError::usage(anyhow!("no model: pass --model or set [extraction] model")))?;
    let client = ChatClient::from_env(endpoint, model, Duration::from_secs(config.extraction_timeout_secs))
        .map_err(CliError::usage)?;

    let corpus = corpus::load(&config.corpus).data_err("loading corpus")?;
    let cache = ResponseCache::open(&config.cache).data_err("opening response cache")?;
    let limits = ExtractionLimits {
        concurrency: config.concurrency,
        retries: config.retries,
        ..ExtractionLimits::default()
    };
    let run = run_extraction(corpus.papers(), &client, &cache, &limits).data_err("extraction")?;

    // keep earlier triage outcomes for names seen again
    let mut previous: HashMap<String, CandidateStatus> = HashMap::new();
    if config.candidates.exists() {
        for c in read_candidates(&config.candidates).data_err("loading candidates")? {
            previous.insert(c.surface, c.status);
        }
    }
    let mut candidates = run.candidates;
    for c in &mut candidates {
        if let Some(status) = previous.remove(&c.surface) {
            c.status = status;
        }
    }
    write_candidates(&config.candidates, &candidates).data_err("writing candidates")?;

    for id in &run.skipped {
        eprintln!("skipped {id}: empty abstract");
    }
    for f in &run.failures {
        eprintln!("failed {}: {}", f.paper_id, f.message);
    }
    println!(
        "{} candidates from {} papers ({} service calls, {} failed)",
        candidates.len(),
        corpus.len(),
        run.service_calls,
        run.failures.len()
    );
    if !run.failures.is_empty() {
        return Err(CliError::service(anyhow!(
            "{} papers failed; rerun to retry them",
            run.failures.len()
        )));
    }
    Ok(())
}
