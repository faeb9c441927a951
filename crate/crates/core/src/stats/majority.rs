use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CompositionScope, ConferenceStats, StatsError};
use crate::lexicon::Lexicon;
use crate::matcher::PaperCounts;

/// The component root holding strictly more than half of the paper's `N`.
pub fn absolute_majority(counts: &PaperCounts, lexicon: &Lexicon) -> Result<Option<String>, StatsError> {
    let n: u64 = counts.per_entry.values().sum();
    if n == 0 {
        return Ok(None);
    }
    let mut by_root: BTreeMap<&str, u64> = BTreeMap::new();
    for (m, &c) in &counts.per_entry {
        *by_root.entry(lexicon.root_of(m)?).or_insert(0) += c;
    }
    Ok(by_root
        .into_iter()
        .find(|&(_, c)| 2 * c > n)
        .map(|(r, _)| r.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    All,
    /// Q4⁺ of [`quartile_split`].
    TopQuarter,
}

impl Selector {
    pub fn tag(self) -> &'static str {
        match self {
            Self::All => "all",
            Self::TopQuarter => "top_quarter",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorityReport {
    pub scope: CompositionScope,
    pub counted_papers: usize,
    pub majority_fraction: f64,
    pub by_component: BTreeMap<String, f64>,
    pub no_majority_fraction: f64,
}

/// Share of papers dominated by each component.
///
/// Papers with `N == 0` are left out of the denominator unless
/// `include_zero` is set, in which case they count as having no majority.
pub fn majority_rates(
    conference: &ConferenceStats,
    selector: Selector,
    lexicon: &Lexicon,
    include_zero: bool,
) -> Result<MajorityReport, StatsError> {
    let selected: Vec<&PaperCounts> = match selector {
        Selector::All => conference.counts.iter().collect(),
        Selector::TopQuarter => {
            let split = quartile_split(conference)?;
            split
                .q4_plus
                .iter()
                .map(|id| {
                    conference
                        .counts
                        .iter()
                        .find(|c| &c.paper_id == id)
                        .expect("split ids come from the conference")
                })
                .collect()
        }
    };
    let scope = match selector {
        Selector::All => CompositionScope::whole(conference.key.clone()),
        Selector::TopQuarter => CompositionScope::subset(conference.key.clone(), "q4_plus"),
    };
    let counted: Vec<&PaperCounts> = selected
        .into_iter()
        .filter(|c| include_zero || c.per_entry.values().any(|&v| v > 0))
        .collect();
    if counted.is_empty() {
        return Err(StatsError::NoCountedPapers(scope.to_string()));
    }
    let mut wins: BTreeMap<String, usize> = BTreeMap::new();
    for c in &counted {
        if let Some(root) = absolute_majority(c, lexicon)? {
            *wins.entry(root).or_insert(0) += 1;
        }
    }
    let total = counted.len() as f64;
    let won: usize = wins.values().sum();
    Ok(MajorityReport {
        scope,
        counted_papers: counted.len(),
        majority_fraction: won as f64 / total,
        by_component: wins.into_iter().map(|(k, v)| (k, v as f64 / total)).collect(),
        no_majority_fraction: (counted.len() - won) as f64 / total,
    })
}

/// Most and least LM-focused quarters of the LM-related papers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuartileSplit {
    pub q4_plus: Vec<String>,
    pub q1_minus: Vec<String>,
}

/// Ranks LM-related papers by `N^L` descending, ties by paper_id, and takes
/// `⌈k/4⌉` from each end.
pub fn quartile_split(conference: &ConferenceStats) -> Result<QuartileSplit, StatsError> {
    let mut ranked: Vec<&PaperCounts> = conference.counts.iter().filter(|c| c.is_lm_related()).collect();
    let k = ranked.len();
    if k < 4 {
        return Err(StatsError::TooFewForQuartiles {
            scope: conference.key.to_string(),
            found: k,
        });
    }
    ranked.sort_by(|a, b| b.n_l.cmp(&a.n_l).then_with(|| a.paper_id.cmp(&b.paper_id)));
    let q = k.div_ceil(4);
    // 2·⌈k/4⌉ <= k for every k >= 4, so the ends never meet
    debug_assert!(2 * q <= k);
    Ok(QuartileSplit {
        q4_plus: ranked[..q].iter().map(|c| c.paper_id.clone()).collect(),
        q1_minus: ranked[k - q..].iter().map(|c| c.paper_id.clone()).collect(),
    })
}
