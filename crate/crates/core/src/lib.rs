//! Diachronic analytics for how a research field talks about language
//! models: the generic term versus the specific models it resolves to.
//!
//! The pipeline is `corpus` (ingest and clean text) → `matcher` (counting
//! functions over a `lexicon`) → `stats` (per-conference aggregates and
//! comparisons) → `report` (chart data and SVG). `extractor` feeds lexicon
//! curation with LLM-proposed candidate names.

pub mod corpus;
pub mod extractor;
pub mod jsonl;
pub mod lexicon;
pub mod matcher;
pub mod report;
pub mod stats;

pub use corpus::{ConferenceKey, Corpus, Paper, PaperMeta};
pub use lexicon::{LTermSet, Lexicon, ModelEntry, TriageAction, TriageDecision};
pub use matcher::{PaperCounts, Scanner};
pub use stats::{CompositionVector, ConferenceRef, ConferenceStats, MajorityReport, PairwiseCell};
