//! Diachronic statistics over per-paper counts.
//!
//! Everything here is a pure function of [`PaperCounts`] grouped by
//! conference plus, where model components matter, the [`Lexicon`].

mod aggregate;
mod composition;
mod ks;
mod majority;
mod pairwise;
mod reports;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ConferenceKey;
use crate::lexicon::LexiconError;

pub use aggregate::{aggregate, estimated_mean, group_by_conference, ConferenceStats};
pub use composition::{
    composition, composition_diff, jaccard, ComponentDelta, CompositionScope, CompositionVector, JaccardMode,
};
pub use ks::{asymptotic_p, kolmogorov_survival, ks_statistic, ks_two_sample, KsMethod, KsResult, EXACT_LIMIT};
pub use majority::{absolute_majority, majority_rates, quartile_split, MajorityReport, QuartileSplit, Selector};
pub use pairwise::{pairwise_matrix, Metric, PairwiseCell, PairwiseMatrix, SignificanceBucket};
pub use reports::{
    compute_report, Analysis, AnalysisOptions, CompositionReport, ConferenceMajority, JaccardCell, JaccardReport,
    KsReport, MajorityFile, OverYears, QuartileContrast, QuartileReport, SkippedScope, StatsBundle, StatsFile,
    StatsReport, TimeseriesPoint, TimeseriesReport, STATS_SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("conference {0} has no papers")]
    EmptyConference(String),
    #[error("sample is empty")]
    EmptySample,
    #[error("sample contains NaN")]
    NanSample,
    #[error("baseline {0} has no LM-related papers")]
    ZeroBaseline(String),
    #[error("need ≥ 2 conferences, got {0}")]
    TooFewConferences(usize),
    #[error("scope {0} has no model mentions")]
    ZeroTotal(String),
    #[error("scope {0} has no papers with model mentions")]
    NoCountedPapers(String),
    #[error("conference {scope} has {found} LM-related papers; quartiles need >= 4")]
    TooFewForQuartiles { scope: String, found: usize },
    #[error("counts for paper {0:?} are not part of the corpus")]
    UnknownPaper(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Malformed { path: String, message: String },
}

/// Conference identity plus its position on the time axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConferenceRef {
    pub venue: String,
    pub year: i32,
    pub ordinal: u32,
}

impl ConferenceRef {
    pub fn new(key: &ConferenceKey, ordinal: u32) -> Self {
        Self {
            venue: key.venue.clone(),
            year: key.year,
            ordinal,
        }
    }

    pub fn key(&self) -> ConferenceKey {
        ConferenceKey::new(self.venue.clone(), self.year)
    }
}

impl fmt::Display for ConferenceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.venue, self.year)
    }
}
