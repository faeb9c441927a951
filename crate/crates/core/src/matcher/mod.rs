//! Counting functions over paper text.
//!
//! `N^L` comes from the ℒ term rules ([`count_lm_terms`]); per-entry `N_m`
//! comes from a leftmost-longest scan over the union of all model aliases
//! ([`ModelMatcher`]). A model alias only matches where the preceding byte is
//! not an ASCII letter; the right side is unconstrained, so "T5-3B" counts
//! toward T5.

mod counts;
mod trie;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Paper};
use crate::lexicon::{LTermSet, Lexicon, TermRule};

pub use counts::{counts_to_string, read_counts, write_counts, COUNTS_KIND, COUNTS_SCHEMA_VERSION};
pub use trie::{AliasMatch, ModelMatcher};

/// Counting-function outputs for one paper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperCounts {
    pub paper_id: String,
    /// `N^L`
    pub n_l: u64,
    pub per_term_l: BTreeMap<String, u64>,
    /// `N_m` for every entry with a nonzero count.
    pub per_entry: BTreeMap<String, u64>,
    /// `N`
    pub n: u64,
}

impl PaperCounts {
    pub fn empty(paper_id: impl Into<String>, l_terms: &LTermSet) -> Self {
        Self {
            paper_id: paper_id.into(),
            n_l: 0,
            per_term_l: l_terms.terms().iter().map(|t| (t.clone(), 0)).collect(),
            per_entry: BTreeMap::new(),
            n: 0,
        }
    }

    /// The present-model set.
    pub fn present(&self) -> impl Iterator<Item = &str> {
        self.per_entry.keys().map(String::as_str)
    }

    pub fn is_lm_related(&self) -> bool {
        self.n_l > 0
    }
}

/// Which part of a paper is scanned.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanScope {
    #[default]
    Body,
    Abstract,
}

/// Occurrences of one ℒ term, non-overlapping, left to right.
pub fn count_term(text: &str, term: &str, rule: TermRule) -> u64 {
    let hay = text.as_bytes();
    let needle = term.as_bytes();
    if needle.is_empty() || needle.len() > hay.len() {
        return 0;
    }
    let mut count = 0;
    let mut i = 0;
    while i + needle.len() <= hay.len() {
        let window = &hay[i..i + needle.len()];
        let hit = match rule {
            TermRule::Phrase => window.eq_ignore_ascii_case(needle),
            TermRule::Acronym => window == needle && left_is_not_alnum(text, i),
        };
        if hit {
            count += 1;
            i += needle.len();
        } else {
            i += 1;
        }
    }
    count
}

fn left_is_not_alnum(text: &str, at: usize) -> bool {
    match text[..at].chars().next_back() {
        None => true,
        Some(c) => !c.is_alphanumeric(),
    }
}

/// `N^L` and its per-term breakdown.
pub fn count_lm_terms(text: &str, l_terms: &LTermSet) -> (u64, BTreeMap<String, u64>) {
    let per: BTreeMap<String, u64> = l_terms
        .iter()
        .map(|(t, rule)| (t.to_string(), count_term(text, t, rule)))
        .collect();
    (per.values().sum(), per)
}

/// `N_m` for every entry present in `text`. Builds a matcher per call; use
/// [`Scanner`] for repeated scans.
pub fn count_models(text: &str, lexicon: &Lexicon) -> BTreeMap<String, u64> {
    ModelMatcher::new(lexicon).count(text)
}

/// A compiled lexicon ready to scan many texts. Immutable and `Sync`.
#[derive(Debug, Clone)]
pub struct Scanner {
    l_terms: LTermSet,
    models: ModelMatcher,
}

impl Scanner {
    pub fn new(lexicon: &Lexicon) -> Self {
        Self {
            l_terms: lexicon.l_terms().clone(),
            models: ModelMatcher::new(lexicon),
        }
    }

    pub fn scan_text(&self, paper_id: &str, text: &str) -> PaperCounts {
        let (n_l, per_term_l) = count_lm_terms(text, &self.l_terms);
        let per_entry = self.models.count(text);
        PaperCounts {
            paper_id: paper_id.to_string(),
            n_l,
            per_term_l,
            n: per_entry.values().sum(),
            per_entry,
        }
    }

    pub fn scan_paper(&self, paper: &Paper, scope: ScanScope) -> PaperCounts {
        let text = match scope {
            ScanScope::Body => &paper.body_text,
            ScanScope::Abstract => &paper.meta.abstract_text,
        };
        self.scan_text(&paper.meta.paper_id, text)
    }

    /// Scans every paper in parallel; output is ordered by paper_id.
    pub fn scan_corpus(&self, corpus: &Corpus, scope: ScanScope) -> Vec<PaperCounts> {
        let mut out: Vec<PaperCounts> = corpus.papers().par_iter().map(|p| self.scan_paper(p, scope)).collect();
        out.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
        out
    }
}

/// Counts over the body text of one paper.
pub fn scan_paper(paper: &Paper, lexicon: &Lexicon) -> PaperCounts {
    Scanner::new(lexicon).scan_paper(paper, ScanScope::Body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::ModelEntry;

    fn lex(entries: Vec<ModelEntry>) -> Lexicon {
        Lexicon::new(LTermSet::default(), entries).unwrap()
    }

    #[test]
    fn lm_terms_examples() {
        let (n, per) = count_lm_terms(
            "Large language models (LLMs) do language modeling.",
            &LTermSet::default(),
        );
        assert_eq!(per["language model"], 2);
        assert_eq!(per["LLM"], 1);
        assert_eq!(per["PLM"], 0);
        assert_eq!(n, 3);

        let (n, per) = count_lm_terms("PLMs and LLMs differ.", &LTermSet::default());
        assert_eq!((per["PLM"], per["LLM"], n), (1, 1, 2));

        assert_eq!(count_lm_terms("", &LTermSet::default()).0, 0);
    }

    #[test]
    fn acronym_boundaries() {
        assert_eq!(count_term("XLLM", "LLM", TermRule::Acronym), 0);
        assert_eq!(count_term("LLM-based 7LLM", "LLM", TermRule::Acronym), 1);
        assert_eq!(count_term("(LLM) LLMs", "LLM", TermRule::Acronym), 2);
        assert_eq!(count_term("llm", "LLM", TermRule::Acronym), 0);
        assert_eq!(count_term("LANGUAGE MODEL", "language model", TermRule::Phrase), 1);
    }

    #[test]
    fn t5_3b_counts_toward_t5() {
        let l = lex(vec![ModelEntry::new("T5").with_variations(["T5-3B"])]);
        let c = count_models("T5-3B is a T5 variant.", &l);
        assert_eq!(c, BTreeMap::from([("T5".to_string(), 2)]));
    }

    #[test]
    fn longest_match_consumes_nested_names() {
        let l = lex(vec![
            ModelEntry::new("GPT"),
            ModelEntry::new("GPT-3"),
            ModelEntry::new("ChatGPT"),
        ]);
        let c = count_models("ChatGPT beats GPT-3.", &l);
        assert_eq!(
            c,
            BTreeMap::from([("ChatGPT".to_string(), 1), ("GPT-3".to_string(), 1)])
        );

        let l = lex(vec![ModelEntry::new("BERT"), ModelEntry::new("RoBERTa")]);
        let c = count_models("RoBERTa extends BERT.", &l);
        assert_eq!(c, BTreeMap::from([("BERT".to_string(), 1), ("RoBERTa".to_string(), 1)]));
    }

    #[test]
    fn aliases_roll_into_one_entry() {
        let l = lex(vec![ModelEntry::new("ChatGPT").with_aliases(["chatgpt"])]);
        assert_eq!(count_models("chatgpt and ChatGPT", &l)["ChatGPT"], 2);
    }

    #[test]
    fn left_boundary_blocks_mid_word() {
        let l = lex(vec![ModelEntry::new("CNN")]);
        assert!(count_models("aCNN", &l).is_empty());
        assert_eq!(count_models("2CNN (CNN)", &l)["CNN"], 2);
    }

    #[test]
    fn empty_lexicon_leaves_lm_terms_alone() {
        let s = Scanner::new(&Lexicon::empty());
        let c = s.scan_text("p", "LLMs like GPT-3");
        assert_eq!(c.n, 0);
        assert_eq!(c.n_l, 1);
        assert!(c.per_entry.is_empty());
    }

    #[test]
    fn concatenation_is_additive() {
        let l = lex(vec![
            ModelEntry::new("T5"),
            ModelEntry::new("GPT"),
            ModelEntry::new("GPT-3"),
            ModelEntry::new("ChatGPT"),
            ModelEntry::new("BERT"),
            ModelEntry::new("RoBERTa"),
        ]);
        let s = Scanner::new(&l);
        let parts = [
            "T5-3B is a T5 variant.",
            "ChatGPT beats GPT-3.",
            "RoBERTa extends BERT.",
        ];
        let whole = s.scan_text("p", &parts.join(" "));
        let mut n = 0;
        let mut per = BTreeMap::<String, u64>::new();
        for p in parts {
            let c = s.scan_text("p", p);
            n += c.n;
            for (k, v) in c.per_entry {
                *per.entry(k).or_default() += v;
            }
        }
        assert_eq!(whole.n, n);
        assert_eq!(whole.per_entry, per);
        assert_eq!(whole.n, 6);
    }
}
