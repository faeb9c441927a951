use std::path::PathBuf;
use std::time::Duration;

use anyhow::anyhow;
use clap::Args;
use termdrift_core::corpus::{
    self, fetch_metadata, fetch_papers, ingest_text_dir, CommandTextSource, Corpus, ExtractionOptions, FetchPolicy,
    HttpTextSource, MetadataClient, Paper, TextSource, VenueOrder, KNOWN_VENUES,
};

use crate::config::Config;
use crate::error::{CliError, ResultExt};

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Venue acronym, e.g. ACL or EMNLP.
    #[arg(required_unless_present = "from_text")]
    venue: Option<String>,
    /// Proceedings year.
    #[arg(required_unless_present = "from_text")]
    year: Option<i32>,
    /// Proceedings metadata service (overrides the config).
    #[arg(long, value_name = "URL")]
    endpoint: Option<String>,
    /// Ingest pre-extracted text from `<DIR>/<VENUE>-<YEAR>/<paper_id>.txt`.
    #[arg(long, value_name = "DIR", conflicts_with_all = ["venue", "year", "endpoint"])]
    from_text: Option<PathBuf>,
}

fn merge_and_store(config: &Config, papers: Vec<Paper>) -> Result<Corpus, CliError> {
    let order = VenueOrder::default();
    let merged = if config.corpus.exists() {
        let existing = corpus::load(&config.corpus).data_err("loading corpus")?;
        existing.merged(papers, &order)
    } else {
        Corpus::with_ordinals(papers, &order)
    }
    .data_err("building corpus")?;
    if let Some(dir) = config.corpus.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).data_err(dir.display())?;
    }
    corpus::store(&merged, &config.corpus).data_err("writing corpus")?;
    Ok(merged)
}

pub fn run(config: &Config, args: IngestArgs) -> Result<(), CliError> {
    let options = ExtractionOptions::default();
    if let Some(dir) = args.from_text {
        let ingest = ingest_text_dir(&dir, &options).data_err("reading text directory")?;
        for (id, w) in &ingest.warnings {
            eprintln!("warning: {id}: {w}");
        }
        let n = ingest.papers.len();
        let merged = merge_and_store(config, ingest.papers)?;
        println!(
            "ingested {n} papers; corpus has {} papers in {} conferences",
            merged.len(),
            merged.conference_index().len()
        );
        return Ok(());
    }

    let venue = args.venue.expect("clap requires venue").to_ascii_uppercase();
    let year = args.year.expect("clap requires year");
    if !KNOWN_VENUES.contains(&venue.as_str()) {
        return Err(CliError::usage(anyhow!(
            "unknown venue {venue:?}; expected one of {}",
            KNOWN_VENUES.join(", ")
        )));
    }
    let endpoint = args
        .endpoint
        .or_else(|| config.fetch_endpoint.clone())
        .ok_or_else(|| CliError::usage(anyhow!("no endpoint: pass --endpoint or set [fetch] endpoint")))?;
    let policy = FetchPolicy {
        concurrency: config.concurrency,
        retries: config.retries,
        timeout: Duration::from_secs(config.fetch_timeout_secs),
        ..FetchPolicy::default()
    };
    let client = MetadataClient::new(endpoint, policy);
    let metas = fetch_metadata(&client, &venue, year).map_err(CliError::fetch)?;
    let scratch = std::env::temp_dir().join(format!("termdrift-{}", std::process::id()));
    let source: Box<dyn TextSource> = match &config.extractor_command {
        Some(cmd) if !cmd.is_empty() => {
            std::fs::create_dir_all(&scratch).data_err(scratch.display())?;
            Box::new(CommandTextSource::new(
                cmd[0].clone(),
                cmd[1..].to_vec(),
                scratch.clone(),
                client.clone(),
            ))
        }
        _ => Box::new(HttpTextSource::new(client.clone())),
    };
    let fetched = fetch_papers(metas, source.as_ref(), &options, config.concurrency);
    let _ = std::fs::remove_dir(&scratch);
    let fetched = fetched.map_err(CliError::fetch)?;
    let mut papers = Vec::with_capacity(fetched.len());
    for (p, warnings) in fetched {
        for w in warnings {
            eprintln!("warning: {}: {w}", p.meta.paper_id);
        }
        papers.push(p);
    }
    let n = papers.len();
    let merged = merge_and_store(config, papers)?;
    println!(
        "ingested {venue} {year}: {n} papers; corpus has {} papers",
        merged.len()
    );
    Ok(())
}
