//! The two keyword sets: generic LM terms and the curated model dictionary.
//!
//! A [`Lexicon`] is immutable once validated. Curation happens by applying
//! [`TriageDecision`]s, each of which yields a new, revalidated value.

mod decision;
mod file;
mod seed;

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use decision::{
    append_decision, apply_decision, read_decision_log, DecisionLogError, TriageAction, TriageDecision,
};
pub use file::{parse_lexicon, parse_lexicon_str, write_lexicon, write_lexicon_string};
pub use seed::{demo_lexicon, seed_lexicon, DEMO_LEXICON_TOML, SEED_LEXICON_TOML};

use crate::matcher::count_term;

pub const DEFAULT_L_TERMS: [&str; 3] = ["language model", "LLM", "PLM"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("l_terms must not be empty")]
    EmptyTerms,
    #[error("l_terms: empty term at position {0}")]
    BlankTerm(usize),
    #[error("l_terms: duplicate term {0:?}")]
    DuplicateTerm(String),
    #[error("l_terms: {inner:?} is matched inside {outer:?}; counts would overlap")]
    NestedTerm { inner: String, outer: String },
    #[error("entry {0:?}: alias list is empty")]
    NoAliases(String),
    #[error("entry {entry:?}: name must equal the first alias (found {first:?})")]
    NameMismatch { entry: String, first: String },
    #[error("entry {0:?}: empty alias")]
    BlankAlias(String),
    #[error("duplicate entry {0:?}")]
    DuplicateEntry(String),
    #[error("alias {alias:?} is claimed by both {first:?} and {second:?}")]
    DuplicateAlias {
        alias: String,
        first: String,
        second: String,
    },
    #[error("entry {entry:?}: variation {variation:?} contains none of its aliases")]
    VariationWithoutAlias { entry: String, variation: String },
    #[error("entry {entry:?}: parent {parent:?} does not exist")]
    DanglingParent { entry: String, parent: String },
    #[error("dependency cycle: {}", chain.join(" -> "))]
    Cycle { chain: Vec<String> },
    #[error("unknown entry {0:?}")]
    UnknownEntry(String),
    #[error("{location}: {message}")]
    Syntax { location: String, message: String },
    #[error("unsupported lexicon schema version {0}")]
    SchemaVersion(u32),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{location}: {source}")]
    Located {
        location: String,
        #[source]
        source: Box<LexiconError>,
    },
}

/// How an ℒ term is located in text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermRule {
    /// ASCII case-insensitive substring ("language model" also hits
    /// "Large Language Models" and "language modeling").
    Phrase,
    /// Case-sensitive, left neighbor must not be alphanumeric ("LLMs" counts,
    /// "XLLM" does not).
    Acronym,
}

impl TermRule {
    /// Terms made only of uppercase ASCII letters and digits are acronyms.
    pub fn for_term(term: &str) -> Self {
        if !term.is_empty() && term.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit()) {
            TermRule::Acronym
        } else {
            TermRule::Phrase
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LTermSet {
    terms: Vec<String>,
}

impl Default for LTermSet {
    fn default() -> Self {
        Self {
            terms: DEFAULT_L_TERMS.iter().map(|t| t.to_string()).collect(),
        }
    }
}

impl LTermSet {
    pub fn new(terms: Vec<String>) -> Result<Self, LexiconError> {
        if terms.is_empty() {
            return Err(LexiconError::EmptyTerms);
        }
        let mut seen = BTreeSet::new();
        for (i, t) in terms.iter().enumerate() {
            if t.trim().is_empty() {
                return Err(LexiconError::BlankTerm(i));
            }
            if !seen.insert(t.as_str()) {
                return Err(LexiconError::DuplicateTerm(t.clone()));
            }
        }
        for inner in &terms {
            for outer in &terms {
                if inner != outer && count_term(outer, inner, TermRule::for_term(inner)) > 0 {
                    return Err(LexiconError::NestedTerm {
                        inner: inner.clone(),
                        outer: outer.clone(),
                    });
                }
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TermRule)> {
        self.terms.iter().map(|t| (t.as_str(), TermRule::for_term(t)))
    }
}

/// One model in the dictionary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelEntry {
    pub entry_id: String,
    pub aliases: Vec<String>,
    pub variations: Vec<String>,
    pub parent: Option<String>,
}

impl ModelEntry {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        Self {
            entry_id: name.clone(),
            aliases: vec![name],
            variations: Vec::new(),
            parent: None,
        }
    }

    pub fn with_aliases<I, S>(mut self, extra: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.aliases.extend(extra.into_iter().map(Into::into));
        self
    }

    pub fn with_parent(mut self, parent: impl Into<String>) -> Self {
        self.parent = Some(parent.into());
        self
    }

    pub fn with_variations<I, S>(mut self, vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.variations.extend(vars.into_iter().map(Into::into));
        self
    }
}

/// ℒ plus ℳ. Entries keep file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    l_terms: LTermSet,
    entries: IndexMap<String, ModelEntry>,
}

impl Lexicon {
    /// Builds and validates a lexicon.
    pub fn new(l_terms: LTermSet, entries: Vec<ModelEntry>) -> Result<Self, LexiconError> {
        let mut map = IndexMap::with_capacity(entries.len());
        for e in entries {
            let id = e.entry_id.clone();
            if map.insert(id.clone(), e).is_some() {
                return Err(LexiconError::DuplicateEntry(id));
            }
        }
        let lex = Self { l_terms, entries: map };
        lex.validate()?;
        Ok(lex)
    }

    pub fn empty() -> Self {
        Self {
            l_terms: LTermSet::default(),
            entries: IndexMap::new(),
        }
    }

    pub fn l_terms(&self) -> &LTermSet {
        &self.l_terms
    }

    pub fn entries(&self) -> impl ExactSizeIterator<Item = &ModelEntry> {
        self.entries.values()
    }

    pub fn entry(&self, id: &str) -> Option<&ModelEntry> {
        self.entries.get(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry owning `alias`, if any (exact, case-sensitive).
    pub fn owner_of(&self, alias: &str) -> Option<&ModelEntry> {
        self.entries.values().find(|e| e.aliases.iter().any(|a| a == alias))
    }

    /// Follows parent links to the dependency-forest root.
    pub fn root_of<'a>(&'a self, entry_id: &str) -> Result<&'a str, LexiconError> {
        let mut cur = self
            .entries
            .get_key_value(entry_id)
            .ok_or_else(|| LexiconError::UnknownEntry(entry_id.to_string()))?;
        // validated forest: at most len() hops
        for _ in 0..=self.entries.len() {
            match &cur.1.parent {
                None => return Ok(cur.0.as_str()),
                Some(p) => {
                    cur = self
                        .entries
                        .get_key_value(p.as_str())
                        .ok_or_else(|| LexiconError::UnknownEntry(p.clone()))?;
                }
            }
        }
        Err(LexiconError::Cycle {
            chain: vec![entry_id.to_string()],
        })
    }

    /// Map of every entry to its root.
    pub fn root_map(&self) -> HashMap<&str, &str> {
        self.entries
            .keys()
            .map(|k| (k.as_str(), self.root_of(k).expect("validated forest")))
            .collect()
    }

    /// Direct dependents of `entry_id`, in file order.
    pub fn children_of<'a>(&'a self, entry_id: &'a str) -> impl Iterator<Item = &'a ModelEntry> {
        self.entries
            .values()
            .filter(move |e| e.parent.as_deref() == Some(entry_id))
    }

    /// Longest chain length from any root (a lone root has depth 1).
    pub fn forest_depth(&self) -> usize {
        self.entries
            .keys()
            .map(|k| {
                let mut d = 1;
                let mut cur = &self.entries[k];
                while let Some(p) = &cur.parent {
                    cur = &self.entries[p];
                    d += 1;
                }
                d
            })
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn into_parts(self) -> (LTermSet, Vec<ModelEntry>) {
        (self.l_terms, self.entries.into_values().collect())
    }

    fn validate(&self) -> Result<(), LexiconError> {
        let mut owners: HashMap<&str, &str> = HashMap::new();
        for (id, e) in &self.entries {
            let first = e.aliases.first().ok_or_else(|| LexiconError::NoAliases(id.clone()))?;
            if first != id {
                return Err(LexiconError::NameMismatch {
                    entry: id.clone(),
                    first: first.clone(),
                });
            }
            for a in &e.aliases {
                if a.is_empty() {
                    return Err(LexiconError::BlankAlias(id.clone()));
                }
                if let Some(prev) = owners.insert(a.as_str(), id.as_str()) {
                    return Err(LexiconError::DuplicateAlias {
                        alias: a.clone(),
                        first: prev.to_string(),
                        second: id.clone(),
                    });
                }
            }
            for v in &e.variations {
                if !e.aliases.iter().any(|a| v.contains(a.as_str())) {
                    return Err(LexiconError::VariationWithoutAlias {
                        entry: id.clone(),
                        variation: v.clone(),
                    });
                }
            }
            if let Some(p) = &e.parent {
                if !self.entries.contains_key(p) {
                    return Err(LexiconError::DanglingParent {
                        entry: id.clone(),
                        parent: p.clone(),
                    });
                }
            }
        }
        for id in self.entries.keys() {
            let mut chain = vec![id.clone()];
            let mut cur = id;
            while let Some(p) = &self.entries[cur].parent {
                if let Some(pos) = chain.iter().position(|c| c == p) {
                    let mut cycle = chain[pos..].to_vec();
                    cycle.push(p.clone());
                    return Err(LexiconError::Cycle { chain: cycle });
                }
                chain.push(p.clone());
                cur = p;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bert_roberta() -> Lexicon {
        Lexicon::new(
            LTermSet::default(),
            vec![ModelEntry::new("BERT"), ModelEntry::new("RoBERTa").with_parent("BERT")],
        )
        .unwrap()
    }

    #[test]
    fn default_terms_and_rules() {
        let t = LTermSet::default();
        let rules: Vec<_> = t.iter().collect();
        assert_eq!(
            rules,
            vec![
                ("language model", TermRule::Phrase),
                ("LLM", TermRule::Acronym),
                ("PLM", TermRule::Acronym)
            ]
        );
    }

    #[test]
    fn nested_terms_rejected() {
        let err = LTermSet::new(vec!["language model".into(), "large language model".into()]).unwrap_err();
        assert!(matches!(err, LexiconError::NestedTerm { .. }));
        // "LM" inside "LLM" is preceded by a letter, so the acronym rule never fires
        assert!(LTermSet::new(vec!["LLM".into(), "LM".into()]).is_ok());
        assert_eq!(LTermSet::new(vec![]).unwrap_err(), LexiconError::EmptyTerms);
    }

    #[test]
    fn forest_depth_and_roots() {
        let lex = bert_roberta();
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.forest_depth(), 2);
        assert_eq!(lex.root_of("RoBERTa").unwrap(), "BERT");
        assert_eq!(lex.root_of("BERT").unwrap(), "BERT");
        assert_eq!(
            lex.root_of("XLNet").unwrap_err(),
            LexiconError::UnknownEntry("XLNet".into())
        );
    }

    #[test]
    fn gpt_chain_root() {
        let lex = Lexicon::new(
            LTermSet::default(),
            vec![
                ModelEntry::new("GPT"),
                ModelEntry::new("GPT-3").with_parent("GPT"),
                ModelEntry::new("GPT-3.5").with_parent("GPT-3"),
            ],
        )
        .unwrap();
        assert_eq!(lex.root_of("GPT-3.5").unwrap(), "GPT");
        let root = lex.root_of("GPT-3.5").unwrap();
        assert_eq!(lex.root_of(root).unwrap(), root);
    }

    #[test]
    fn duplicate_alias_names_both_entries() {
        let err = Lexicon::new(
            LTermSet::default(),
            vec![ModelEntry::new("GPT"), ModelEntry::new("GPT-2").with_aliases(["GPT"])],
        )
        .unwrap_err();
        assert_eq!(
            err,
            LexiconError::DuplicateAlias {
                alias: "GPT".into(),
                first: "GPT".into(),
                second: "GPT-2".into()
            }
        );
    }

    #[test]
    fn cycle_reports_chain() {
        let err = Lexicon::new(
            LTermSet::default(),
            vec![
                ModelEntry::new("A").with_parent("B"),
                ModelEntry::new("B").with_parent("C"),
                ModelEntry::new("C").with_parent("A"),
            ],
        )
        .unwrap_err();
        match err {
            LexiconError::Cycle { chain } => {
                assert_eq!(chain, vec!["A", "B", "C", "A"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_parent_and_bad_variation() {
        let err = Lexicon::new(
            LTermSet::default(),
            vec![ModelEntry::new("RoBERTa").with_parent("BERT")],
        )
        .unwrap_err();
        assert!(matches!(err, LexiconError::DanglingParent { .. }));
        let err = Lexicon::new(
            LTermSet::default(),
            vec![ModelEntry::new("T5").with_variations(["mBART-50"])],
        )
        .unwrap_err();
        assert!(matches!(err, LexiconError::VariationWithoutAlias { .. }));
    }
}
