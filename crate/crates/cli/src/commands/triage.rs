//! Curation loop: one candidate at a time, one decision per keypress.
//!
//! Each accepted decision is validated against the current lexicon, then
//! committed in order: lexicon file (atomic replace), decision log (append),
//! candidate file (status update). A crash between steps is repaired on the
//! next start because the log is authoritative for what has been decided.

use std::collections::{BTreeSet, HashMap};
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::anyhow;
use clap::Args;
use termdrift_core::corpus;
use termdrift_core::extractor::{
    read_candidates, suggest_classification, write_candidates, CandidateName, CandidateStatus, Suggestion,
};
use termdrift_core::lexicon::{
    append_decision, apply_decision, parse_lexicon, read_decision_log, write_lexicon, Lexicon, LexiconError,
    TriageAction, TriageDecision,
};

use crate::config::Config;
use crate::error::{CliError, ResultExt};

#[derive(Debug, Args)]
pub struct TriageArgs {
    /// Replay a recorded decision log instead of prompting.
    #[arg(long, value_name = "FILE")]
    decisions: Option<PathBuf>,
    /// Curator name stored with each decision (default: $USER).
    #[arg(long, value_name = "NAME")]
    by: Option<String>,
}

struct Session<'a> {
    config: &'a Config,
    lexicon: Lexicon,
    candidates: Vec<CandidateName>,
    logged: BTreeSet<String>,
    titles: HashMap<String, String>,
    decided_by: String,
    now: fn() -> u64,
}

#[derive(Debug, Default, PartialEq, Eq)]
struct Summary {
    decided: usize,
    skipped: usize,
    remaining: usize,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn describe(s: &Suggestion) -> String {
    match s {
        Suggestion::AlreadyAlias(e) => format!("already an alias of {e}"),
        Suggestion::VariationOf(e) => format!("variation of {e}"),
        Suggestion::PossibleAliasOf(e) => format!("possible alias of {e}"),
        Suggestion::NewOrDiscard => "new entry or discard".to_string(),
    }
}

impl<'a> Session<'a> {
    fn open(config: &'a Config, decided_by: String) -> Result<Self, CliError> {
        if !config.candidates.exists() {
            return Err(CliError::usage(anyhow!(
                "no candidate file at {} (run `extract` first)",
                config.candidates.display()
            )));
        }
        let mut candidates = read_candidates(&config.candidates).data_err("loading candidates")?;
        let lexicon = parse_lexicon(&config.lexicon).data_err("loading lexicon")?;
        let log = read_decision_log(&config.decision_log).data_err("loading decision log")?;
        let mut by_surface: HashMap<&str, &TriageDecision> = HashMap::new();
        for d in &log {
            by_surface.insert(&d.candidate, d);
        }
        let mut repaired = false;
        for c in &mut candidates {
            if let (CandidateStatus::Pending, Some(d)) = (&c.status, by_surface.get(c.surface.as_str())) {
                c.status = CandidateStatus::Decided((*d).clone());
                repaired = true;
            }
        }
        if repaired {
            write_candidates(&config.candidates, &candidates).data_err("writing candidates")?;
        }
        let titles = if config.corpus.exists() {
            let corpus = corpus::load(&config.corpus).data_err("loading corpus")?;
            corpus
                .papers()
                .iter()
                .map(|p| (p.meta.paper_id.clone(), p.meta.title.clone()))
                .collect()
        } else {
            HashMap::new()
        };
        Ok(Self {
            config,
            lexicon,
            candidates,
            logged: log.into_iter().map(|d| d.candidate).collect(),
            titles,
            decided_by,
            now: unix_now,
        })
    }

    /// Validates and persists one decision. A rejected decision changes
    /// nothing on disk.
    fn commit(&mut self, decision: TriageDecision) -> Result<Result<(), LexiconError>, CliError> {
        let next = match apply_decision(&self.lexicon, &decision) {
            Ok(l) => l,
            Err(e) => return Ok(Err(e)),
        };
        if next != self.lexicon {
            write_lexicon(&next, &self.config.lexicon).data_err("writing lexicon")?;
        }
        append_decision(&self.config.decision_log, &decision).data_err("appending decision")?;
        self.lexicon = next;
        self.logged.insert(decision.candidate.clone());
        if let Some(c) = self.candidates.iter_mut().find(|c| c.surface == decision.candidate) {
            c.status = CandidateStatus::Decided(decision);
            write_candidates(&self.config.candidates, &self.candidates).data_err("writing candidates")?;
        }
        Ok(Ok(()))
    }

    fn pending(&self) -> Vec<usize> {
        self.candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| c.status == CandidateStatus::Pending && !self.logged.contains(&c.surface))
            .map(|(i, _)| i)
            .collect()
    }

    fn replay(&mut self, decisions: Vec<TriageDecision>) -> Result<Summary, CliError> {
        let mut summary = Summary::default();
        for d in decisions {
            if self.logged.contains(&d.candidate) {
                summary.skipped += 1;
                continue;
            }
            let candidate = d.candidate.clone();
            if let Err(e) = self.commit(d)? {
                return Err(CliError::data(anyhow!("replaying {candidate:?}: {e}")));
            }
            summary.decided += 1;
        }
        summary.remaining = self.pending().len();
        Ok(summary)
    }

    fn interactive(&mut self, input: &mut impl BufRead, out: &mut impl Write) -> Result<Summary, CliError> {
        let io_err = |e: io::Error| CliError::data(anyhow!("terminal: {e}"));
        let queue = self.pending();
        let total = queue.len();
        let mut summary = Summary::default();
        'candidates: for (pos, &idx) in queue.iter().enumerate() {
            let cand = self.candidates[idx].clone();
            let suggestion = suggest_classification(&cand.surface, &self.lexicon);
            writeln!(
                out,
                "\n[{}/{}] {:?}  frequency {}",
                pos + 1,
                total,
                cand.surface,
                cand.frequency
            )
            .map_err(io_err)?;
            for id in &cand.example_paper_ids {
                let title = self.titles.get(id).map(String::as_str).unwrap_or("");
                writeln!(out, "  {id}  {title}").map_err(io_err)?;
            }
            writeln!(out, "  suggestion: {}", describe(&suggestion)).map_err(io_err)?;
            loop {
                write!(out, "[n]ew [a]lias [v]ariation [d]iscard [s]kip [q]uit > ").map_err(io_err)?;
                out.flush().map_err(io_err)?;
                let Some(line) = read_line(input).map_err(io_err)? else {
                    summary.remaining = total - pos;
                    break 'candidates;
                };
                let action = match line.as_str() {
                    "n" => TriageAction::NewEntry,
                    "d" => TriageAction::Discard,
                    "s" => {
                        summary.skipped += 1;
                        continue 'candidates;
                    }
                    "q" => {
                        summary.remaining = total - pos;
                        break 'candidates;
                    }
                    "a" | "v" => {
                        let default = suggestion.entry();
                        write!(out, "entry [{}]: ", default.unwrap_or("")).map_err(io_err)?;
                        out.flush().map_err(io_err)?;
                        let Some(entry) = read_line(input).map_err(io_err)? else {
                            summary.remaining = total - pos;
                            break 'candidates;
                        };
                        let entry = match (entry.is_empty(), default) {
                            (false, _) => entry,
                            (true, Some(d)) => d.to_string(),
                            (true, None) => {
                                writeln!(out, "no entry given").map_err(io_err)?;
                                continue;
                            }
                        };
                        if line == "a" {
                            TriageAction::AliasOf(entry)
                        } else {
                            TriageAction::VariationOf(entry)
                        }
                    }
                    other => {
                        writeln!(out, "unknown key {other:?}").map_err(io_err)?;
                        continue;
                    }
                };
                let decision = TriageDecision {
                    candidate: cand.surface.clone(),
                    action,
                    decided_by: self.decided_by.clone(),
                    timestamp: (self.now)(),
                };
                match self.commit(decision)? {
                    Ok(()) => {
                        summary.decided += 1;
                        continue 'candidates;
                    }
                    Err(e) => writeln!(out, "conflict: {e}").map_err(io_err)?,
                }
            }
        }
        Ok(summary)
    }
}

fn read_line(input: &mut impl BufRead) -> io::Result<Option<String>> {
    let mut buf = String::new();
    if input.read_line(&mut buf)? == 0 {
        return Ok(None);
    }
    Ok(Some(buf.trim().to_string()))
}

pub fn run(config: &Config, args: TriageArgs) -> Result<(), CliError> {
    let by = args
        .by
        .or_else(|| std::env::var("USER").ok())
        .unwrap_or_else(|| "curator".to_string());
    let mut session = Session::open(config, by)?;
    let summary = match args.decisions {
        Some(path) => {
            let decisions = read_decision_log(&path).data_err("reading decisions to replay")?;
            session.replay(decisions)?
        }
        None => {
            let stdin = io::stdin();
            let stdout = io::stdout();
            session.interactive(&mut stdin.lock(), &mut stdout.lock())?
        }
    };
    println!(
        "{} decided, {} skipped, {} pending",
        summary.decided,
        summary.skipped,
        session.pending().len()
    );
    Ok(())
}
