use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Lexicon, LexiconError, ModelEntry};

/// What the curator decided for one candidate string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", content = "entry", rename_all = "snake_case")]
pub enum TriageAction {
    NewEntry,
    AliasOf(String),
    VariationOf(String),
    Discard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriageDecision {
    pub candidate: String,
    #[serde(flatten)]
    pub action: TriageAction,
    pub decided_by: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

/// Returns the lexicon with `decision` applied, or an error and no change.
pub fn apply_decision(lexicon: &Lexicon, decision: &TriageDecision) -> Result<Lexicon, LexiconError> {
    let candidate = decision.candidate.as_str();
    if candidate.is_empty() || candidate.trim() != candidate {
        return Err(LexiconError::BlankAlias(candidate.to_string()));
    }
    let (terms, mut entries) = lexicon.clone().into_parts();
    let target = |entries: &mut Vec<ModelEntry>, id: &str| -> Result<usize, LexiconError> {
        entries
            .iter()
            .position(|e| e.entry_id == id)
            .ok_or_else(|| LexiconError::UnknownEntry(id.to_string()))
    };
    match &decision.action {
        TriageAction::NewEntry => entries.push(ModelEntry::new(candidate)),
        TriageAction::AliasOf(id) => {
            let i = target(&mut entries, id)?;
            if !entries[i].aliases.iter().any(|a| a == candidate) {
                entries[i].aliases.push(candidate.to_string());
            }
        }
        TriageAction::VariationOf(id) => {
            let i = target(&mut entries, id)?;
            let e = &mut entries[i];
            if !e.aliases.iter().any(|a| candidate.contains(a.as_str())) {
                return Err(LexiconError::VariationWithoutAlias {
                    entry: id.clone(),
                    variation: candidate.to_string(),
                });
            }
            if !e.variations.iter().any(|v| v == candidate) {
                e.variations.push(candidate.to_string());
            }
        }
        TriageAction::Discard => return Ok(lexicon.clone()),
    }
    Lexicon::new(terms, entries)
}

#[derive(Debug, Error)]
pub enum DecisionLogError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed decision record: {message}")]
    Malformed { path: String, line: usize, message: String },
}

/// Appends one JSON line. The log is never rewritten.
pub fn append_decision(path: impl AsRef<Path>, decision: &TriageDecision) -> Result<(), DecisionLogError> {
    let path = path.as_ref();
    let io = |source| DecisionLogError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    let mut line = serde_json::to_string(decision).expect("decision serializes");
    line.push('\n');
    f.write_all(line.as_bytes()).map_err(io)?;
    f.sync_data().map_err(io)
}

/// Reads a decision log; a missing file is an empty log.
pub fn read_decision_log(path: impl AsRef<Path>) -> Result<Vec<TriageDecision>, DecisionLogError> {
    let path = path.as_ref();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(source) => {
            return Err(DecisionLogError::Io {
                path: path.display().to_string(),
                source,
            })
        }
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| DecisionLogError::Malformed {
                path: path.display().to_string(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LTermSet;

    fn decide(candidate: &str, action: TriageAction) -> TriageDecision {
        TriageDecision {
            candidate: candidate.into(),
            action,
            decided_by: "tester".into(),
            timestamp: 0,
        }
    }

    fn base() -> Lexicon {
        Lexicon::new(
            LTermSet::default(),
            vec![ModelEntry::new("ChatGPT"), ModelEntry::new("T5")],
        )
        .unwrap()
    }

    // case variants of one model merge into a single entry
    #[test]
    fn chatgpt_alias_merge() {
        let lex = apply_decision(&base(), &decide("chatgpt", TriageAction::AliasOf("ChatGPT".into()))).unwrap();
        assert_eq!(lex.entry("ChatGPT").unwrap().aliases, ["ChatGPT", "chatgpt"]);
    }

    // variations are stored on the entry, never as aliases
    #[test]
    fn t5_3b_variation() {
        let lex = apply_decision(&base(), &decide("T5-3B", TriageAction::VariationOf("T5".into()))).unwrap();
        let t5 = lex.entry("T5").unwrap();
        assert_eq!(t5.variations, ["T5-3B"]);
        assert_eq!(t5.aliases, ["T5"]);
    }

    #[test]
    fn bleu_discard_leaves_lexicon_unchanged_but_is_logged() {
        let d = decide("BLEU", TriageAction::Discard);
        let lex = apply_decision(&base(), &d).unwrap();
        assert_eq!(lex, base());
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("decisions.jsonl");
        append_decision(&log, &d).unwrap();
        assert_eq!(read_decision_log(&log).unwrap(), vec![d]);
    }

    #[test]
    fn repeated_alias_is_a_no_op() {
        let d = decide("chatgpt", TriageAction::AliasOf("ChatGPT".into()));
        let once = apply_decision(&base(), &d).unwrap();
        assert_eq!(apply_decision(&once, &d).unwrap(), once);
    }

    #[test]
    fn new_entry_initializes_alias_list() {
        let lex = apply_decision(&base(), &decide("LLaMA", TriageAction::NewEntry)).unwrap();
        assert_eq!(lex.entry("LLaMA").unwrap().aliases, ["LLaMA"]);
        assert_eq!(lex.len(), 3);
    }

    #[test]
    fn rejected_decisions() {
        let err = apply_decision(&base(), &decide("T5", TriageAction::AliasOf("ChatGPT".into()))).unwrap_err();
        assert!(matches!(err, LexiconError::DuplicateAlias { .. }));
        let err = apply_decision(&base(), &decide("mBART", TriageAction::VariationOf("T5".into()))).unwrap_err();
        assert!(matches!(err, LexiconError::VariationWithoutAlias { .. }));
        let err = apply_decision(&base(), &decide("x", TriageAction::AliasOf("Nope".into()))).unwrap_err();
        assert_eq!(err, LexiconError::UnknownEntry("Nope".into()));
        let err = apply_decision(&base(), &decide("ChatGPT", TriageAction::NewEntry)).unwrap_err();
        assert!(matches!(
            err,
            LexiconError::DuplicateEntry(_) | LexiconError::DuplicateAlias { .. }
        ));
    }

    #[test]
    fn record_shape() {
        let json = serde_json::to_string(&decide("T5-3B", TriageAction::VariationOf("T5".into()))).unwrap();
        assert_eq!(
            json,
            r#"{"candidate":"T5-3B","action":"variation_of","entry":"T5","decided_by":"tester","timestamp":0}"#
        );
        let json = serde_json::to_string(&decide("BLEU", TriageAction::Discard)).unwrap();
        assert_eq!(
            json,
            r#"{"candidate":"BLEU","action":"discard","decided_by":"tester","timestamp":0}"#
        );
    }

    #[test]
    fn malformed_log_line_is_located() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("d.jsonl");
        fs::write(
            &log,
            "{\"candidate\":\"BLEU\",\"action\":\"discard\",\"decided_by\":\"a\",\"timestamp\":1}\n{oops\n",
        )
        .unwrap();
        match read_decision_log(&log).unwrap_err() {
            DecisionLogError::Malformed { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
    }
}
