use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ConferenceRef, StatsError};
use crate::corpus::Corpus;
use crate::matcher::PaperCounts;

/// Per-conference aggregates. Means run over all papers, zero counts
/// included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConferenceStats {
    pub key: ConferenceRef,
    pub paper_count: usize,
    pub lm_related_count: usize,
    pub prop_lm_related: f64,
    pub mean_n_l: f64,
    pub mean_n: f64,
    /// Sorted by paper_id.
    #[serde(skip)]
    pub counts: Vec<PaperCounts>,
}

impl ConferenceStats {
    pub fn n_l_sample(&self) -> Vec<f64> {
        self.counts.iter().map(|c| c.n_l as f64).collect()
    }

    pub fn n_sample(&self) -> Vec<f64> {
        self.counts.iter().map(|c| c.n as f64).collect()
    }
}

pub fn aggregate(key: ConferenceRef, mut counts: Vec<PaperCounts>) -> Result<ConferenceStats, StatsError> {
    if counts.is_empty() {
        return Err(StatsError::EmptyConference(key.to_string()));
    }
    counts.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
    let n = counts.len() as f64;
    let lm_related_count = counts.iter().filter(|c| c.is_lm_related()).count();
    let sum_l: u64 = counts.iter().map(|c| c.n_l).sum();
    let sum_n: u64 = counts.iter().map(|c| c.n).sum();
    Ok(ConferenceStats {
        key,
        paper_count: counts.len(),
        lm_related_count,
        prop_lm_related: lm_related_count as f64 / n,
        mean_n_l: sum_l as f64 / n,
        mean_n: sum_n as f64 / n,
        counts,
    })
}

/// Scales the baseline mean by the ratio of LM-related shares.
pub fn estimated_mean(baseline: &ConferenceStats, target_prop: f64) -> Result<f64, StatsError> {
    if baseline.prop_lm_related <= 0.0 {
        return Err(StatsError::ZeroBaseline(baseline.key.to_string()));
    }
    Ok(baseline.mean_n_l * (target_prop / baseline.prop_lm_related))
}

/// Splits scan output by conference, in time order.
///
/// Conferences with no counts are skipped; counts for papers the corpus does
/// not know are an error.
pub fn group_by_conference(corpus: &Corpus, counts: &[PaperCounts]) -> Result<Vec<ConferenceStats>, StatsError> {
    let mut owner = HashMap::new();
    for p in corpus.papers() {
        owner.insert(p.meta.paper_id.as_str(), p.meta.conference());
    }
    let mut grouped: HashMap<_, Vec<PaperCounts>> = HashMap::new();
    for c in counts {
        let key = owner
            .get(c.paper_id.as_str())
            .ok_or_else(|| StatsError::UnknownPaper(c.paper_id.clone()))?;
        grouped.entry(key.clone()).or_default().push(c.clone());
    }
    let mut out = Vec::new();
    for (ordinal, key) in corpus.conferences() {
        if let Some(cs) = grouped.remove(&key) {
            out.push(aggregate(ConferenceRef::new(&key, ordinal), cs)?);
        }
    }
    Ok(out)
}
