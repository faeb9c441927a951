//! `termdrift`: ingest proceedings, count terms and models, compute
//! diachronic statistics, render figures, and curate the model lexicon.
//!
//! Exit codes: 0 success, 1 usage or configuration, 2 data error,
//! 3 external service error.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "termdrift", version, about = "Diachronic LM terminology analytics")]
struct Cli {
    /// Config file (default: ./termdrift.toml when present).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Corpus store (JSONL).
    #[arg(long, global = true, value_name = "FILE")]
    corpus: Option<PathBuf>,
    /// Lexicon file (TOML).
    #[arg(long, global = true, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Append-only triage decision log.
    #[arg(long, global = true, value_name = "FILE")]
    decision_log: Option<PathBuf>,
    /// Per-paper counts written by `scan`.
    #[arg(long, global = true, value_name = "FILE")]
    counts: Option<PathBuf>,
    /// Candidate names written by `extract`.
    #[arg(long, global = true, value_name = "FILE")]
    candidates: Option<PathBuf>,
    /// Extraction response cache.
    #[arg(long, global = true, value_name = "FILE")]
    cache: Option<PathBuf>,
    /// Directory for stats report files.
    #[arg(long, global = true, value_name = "DIR")]
    stats_dir: Option<PathBuf>,
    /// Directory for figures.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for network-bound steps.
    #[arg(long, global = true, value_name = "N")]
    concurrency: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Add a proceedings volume to the corpus.
    Ingest(commands::ingest::IngestArgs),
    /// Count LM terms and model mentions in every paper.
    Scan(commands::scan::ScanArgs),
    /// Compute statistics over the counts.
    Stats(commands::stats::StatsArgs),
    /// Ask an LLM for candidate model names in each abstract.
    Extract(commands::extract::ExtractArgs),
    /// Classify candidate names into the lexicon.
    Triage(commands::triage::TriageArgs),
    /// Render chart data and SVG figures from stats files.
    Report(commands::report::ReportArgs),
    /// Create or validate the lexicon file.
    #[command(subcommand)]
    Lexicon(commands::lexicon::LexiconCommand),
}

impl Cli {
    fn config(&self) -> Result<Config, CliError> {
        let mut c = Config::load(self.config.as_deref()).map_err(CliError::usage)?;
        let set = |slot: &mut PathBuf, v: &Option<PathBuf>| {
            if let Some(v) = v {
                *slot = v.clone();
            }
        };
        set(&mut c.corpus, &self.corpus);
        set(&mut c.lexicon, &self.lexicon);
        set(&mut c.decision_log, &self.decision_log);
        set(&mut c.counts, &self.counts);
        set(&mut c.candidates, &self.candidates);
        set(&mut c.cache, &self.cache);
        set(&mut c.stats_dir, &self.stats_dir);
        set(&mut c.output, &self.out);
        if let Some(n) = self.concurrency {
            c.concurrency = n.max(1);
        }
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.config()?;
    match cli.command {
        Command::Ingest(a) => commands::ingest::run(&config, a),
        Command::Scan(a) => commands::scan::run(&config, a),
        Command::Stats(a) => commands::stats::run(&config, a),
        Command::Extract(a) => commands::extract::run(&config, a),
        Command::Triage(a) => commands::triage::run(&config, a),
        Command::Report(a) => commands::report::run(&config, a),
        Command::Lexicon(c) => commands::lexicon::run(&config, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
