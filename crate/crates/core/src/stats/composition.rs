use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ConferenceRef, StatsError};
use crate::lexicon::Lexicon;
use crate::matcher::PaperCounts;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompositionScope {
    pub conference: ConferenceRef,
    /// Paper-subset tag such as `q4_plus`; `None` for the whole conference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<String>,
}

impl CompositionScope {
    pub fn whole(conference: ConferenceRef) -> Self {
        Self {
            conference,
            subset: None,
        }
    }

    pub fn subset(conference: ConferenceRef, tag: impl Into<String>) -> Self {
        Self {
            conference,
            subset: Some(tag.into()),
        }
    }
}

impl fmt::Display for CompositionScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subset {
            Some(s) => write!(f, "{}/{}", self.conference, s),
            None => write!(f, "{}", self.conference),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionVector {
    pub scope: CompositionScope,
    /// `Σ N` over the scope.
    pub total: u64,
    pub entry_counts: BTreeMap<String, u64>,
    pub by_entry: BTreeMap<String, f64>,
    pub by_component: BTreeMap<String, f64>,
}

impl CompositionVector {
    pub fn component_counts(&self, lexicon: &Lexicon) -> Result<BTreeMap<String, u64>, StatsError> {
        let mut out = BTreeMap::new();
        for (m, &c) in &self.entry_counts {
            *out.entry(lexicon.root_of(m)?.to_string()).or_insert(0) += c;
        }
        Ok(out)
    }
}

pub fn composition(
    scope: CompositionScope,
    counts: &[PaperCounts],
    lexicon: &Lexicon,
) -> Result<CompositionVector, StatsError> {
    let mut entry_counts: BTreeMap<String, u64> = BTreeMap::new();
    for c in counts {
        for (m, &v) in &c.per_entry {
            if v > 0 {
                *entry_counts.entry(m.clone()).or_insert(0) += v;
            }
        }
    }
    let total: u64 = entry_counts.values().sum();
    if total == 0 {
        return Err(StatsError::ZeroTotal(scope.to_string()));
    }
    let mut component_counts: BTreeMap<String, u64> = BTreeMap::new();
    for (m, &v) in &entry_counts {
        *component_counts.entry(lexicon.root_of(m)?.to_string()).or_insert(0) += v;
    }
    let t = total as f64;
    Ok(CompositionVector {
        scope,
        total,
        by_entry: entry_counts.iter().map(|(k, &v)| (k.clone(), v as f64 / t)).collect(),
        by_component: component_counts.into_iter().map(|(k, v)| (k, v as f64 / t)).collect(),
        entry_counts,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JaccardMode {
    /// Intersection over union of present entries.
    Set,
    /// `Σ min / Σ max` over entry shares.
    #[default]
    Weighted,
}

impl JaccardMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Set => "set",
            Self::Weighted => "weighted",
        }
    }
}

/// Similarity of two compositions at entry level. Two empty vectors count as
/// identical.
pub fn jaccard(a: &CompositionVector, b: &CompositionVector, mode: JaccardMode) -> f64 {
    match mode {
        JaccardMode::Set => {
            let sa: BTreeSet<&str> = a
                .by_entry
                .iter()
                .filter(|(_, &v)| v > 0.0)
                .map(|(k, _)| k.as_str())
                .collect();
            let sb: BTreeSet<&str> = b
                .by_entry
                .iter()
                .filter(|(_, &v)| v > 0.0)
                .map(|(k, _)| k.as_str())
                .collect();
            let union = sa.union(&sb).count();
            if union == 0 {
                return 1.0;
            }
            sa.intersection(&sb).count() as f64 / union as f64
        }
        JaccardMode::Weighted => {
            let keys: BTreeSet<&String> = a.by_entry.keys().chain(b.by_entry.keys()).collect();
            let (mut lo, mut hi) = (0.0, 0.0);
            for k in keys {
                let x = a.by_entry.get(k).copied().unwrap_or(0.0);
                let y = b.by_entry.get(k).copied().unwrap_or(0.0);
                lo += x.min(y);
                hi += x.max(y);
            }
            if hi == 0.0 {
                1.0
            } else {
                lo / hi
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDelta {
    pub root: String,
    pub delta: f64,
}

/// `a.by_component − b.by_component`, largest magnitude first, ties by root.
pub fn composition_diff(a: &CompositionVector, b: &CompositionVector, top_k: Option<usize>) -> Vec<ComponentDelta> {
    let roots: BTreeSet<&String> = a.by_component.keys().chain(b.by_component.keys()).collect();
    let mut out: Vec<ComponentDelta> = roots
        .into_iter()
        .map(|r| ComponentDelta {
            root: r.clone(),
            delta: a.by_component.get(r).copied().unwrap_or(0.0) - b.by_component.get(r).copied().unwrap_or(0.0),
        })
        .collect();
    out.sort_by(|x, y| {
        y.delta
            .abs()
            .partial_cmp(&x.delta.abs())
            .expect("finite shares")
            .then_with(|| x.root.cmp(&y.root))
    });
    if let Some(k) = top_k {
        out.truncate(k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{LTermSet, ModelEntry};

    fn scope() -> CompositionScope {
        CompositionScope::whole(ConferenceRef {
            venue: "EMNLP".into(),
            year: 2020,
            ordinal: 0,
        })
    }

    fn counts(pairs: &[(&str, u64)]) -> PaperCounts {
        PaperCounts {
            paper_id: "p".into(),
            n_l: 0,
            per_term_l: BTreeMap::new(),
            per_entry: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            n: pairs.iter().map(|p| p.1).sum(),
        }
    }

    fn lex() -> Lexicon {
        Lexicon::new(
            LTermSet::default(),
            vec![
                ModelEntry::new("BERT"),
                ModelEntry::new("RoBERTa").with_parent("BERT"),
                ModelEntry::new("RNN"),
                ModelEntry::new("CNN"),
                ModelEntry::new("GPT"),
                ModelEntry::new("T5"),
                ModelEntry::new("LLaMA"),
            ],
        )
        .unwrap()
    }

    fn vector(shares: &[(&str, f64)]) -> CompositionVector {
        CompositionVector {
            scope: scope(),
            total: 0,
            entry_counts: BTreeMap::new(),
            by_entry: shares.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            by_component: shares.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    #[test]
    fn bert_shares_with_dependents() {
        // RoBERTa rolls up into the BERT component
        let c = composition(
            scope(),
            &[counts(&[
                ("BERT", 41),
                ("RoBERTa", 14),
                ("RNN", 20),
                ("CNN", 6),
                ("GPT", 5),
                ("T5", 14),
            ])],
            &lex(),
        )
        .unwrap();
        assert!((c.by_entry["BERT"] - 0.41).abs() < 1e-12);
        assert!((c.by_component["BERT"] - 0.55).abs() < 1e-12);
        assert!(!c.by_component.contains_key("RoBERTa"));
    }

    #[test]
    fn trivial_shares() {
        let c = composition(scope(), &[counts(&[("GPT", 7)])], &lex()).unwrap();
        assert_eq!(c.by_entry["GPT"], 1.0);
        let c = composition(scope(), &[counts(&[("GPT", 3)]), counts(&[("T5", 1)])], &lex()).unwrap();
        assert_eq!((c.by_entry["GPT"], c.by_entry["T5"]), (0.75, 0.25));
    }

    #[test]
    fn zero_total_names_scope() {
        let e = composition(scope(), &[counts(&[])], &lex()).unwrap_err();
        assert!(e.to_string().contains("EMNLP-2020"));
    }

    #[test]
    fn jaccard_examples() {
        let a = vector(&[("BERT", 1.0 / 3.0), ("GPT", 1.0 / 3.0), ("T5", 1.0 / 3.0)]);
        let b = vector(&[("BERT", 1.0 / 3.0), ("GPT", 1.0 / 3.0), ("LLaMA", 1.0 / 3.0)]);
        assert_eq!(jaccard(&a, &b, JaccardMode::Set), 0.5);
        // equal shares: Σmin = 2/3, Σmax = 4/3
        assert!((jaccard(&a, &b, JaccardMode::Weighted) - 0.5).abs() < 1e-12);
        for mode in [JaccardMode::Set, JaccardMode::Weighted] {
            assert_eq!(jaccard(&a, &a, mode), 1.0);
            assert_eq!(jaccard(&vector(&[("BERT", 1.0)]), &vector(&[("GPT", 1.0)]), mode), 0.0);
        }
    }

    #[test]
    fn diff_example() {
        let a = vector(&[("GPT", 0.6), ("BERT", 0.4)]);
        let b = vector(&[("GPT", 0.3), ("BERT", 0.7)]);
        let d: BTreeMap<_, _> = composition_diff(&a, &b, None)
            .into_iter()
            .map(|d| (d.root, d.delta))
            .collect();
        assert!((d["GPT"] - 0.3).abs() < 1e-12);
        assert!((d["BERT"] + 0.3).abs() < 1e-12);
        assert_eq!(composition_diff(&a, &a, None).iter().map(|d| d.delta).sum::<f64>(), 0.0);
        assert_eq!(composition_diff(&a, &b, Some(1)).len(), 1);
    }
}
