use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::lexicon::Lexicon;

pub const DEFAULT_THRESHOLD: f64 = 0.005;
pub const OTHER: &str = "other";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunburstNode {
    pub entry_id: String,
    pub label: String,
    /// Subtree total: own count plus all dependents.
    pub value: u64,
    pub own_count: u64,
    pub children: Vec<SunburstNode>,
    pub color_key: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SunburstChart {
    pub scope: String,
    pub total: u64,
    pub threshold: f64,
    /// Ring-0 nodes; a top-level `other` collects roots below threshold.
    pub roots: Vec<SunburstNode>,
}

fn order(nodes: &mut [SunburstNode]) {
    nodes.sort_by(|a, b| b.value.cmp(&a.value).then_with(|| a.entry_id.cmp(&b.entry_id)));
}

/// Builds the dependency-forest tree for one scope's entry counts.
///
/// Non-root entries whose subtree share falls below `threshold` are folded
/// into one `other` leaf under their parent; whole roots below it go into a
/// top-level `other` node. Every node's value is its own count plus its
/// children's values, and the ring-0 values sum to `N`.
pub fn sunburst_data(
    scope: impl Into<String>,
    entry_counts: &BTreeMap<String, u64>,
    lexicon: &Lexicon,
    threshold: f64,
) -> Result<SunburstChart, ReportError> {
    let scope = scope.into();
    let total: u64 = entry_counts.values().sum();
    if total == 0 {
        return Err(ReportError::EmptyScope(scope));
    }
    for id in entry_counts.keys() {
        if lexicon.entry(id).is_none() {
            return Err(ReportError::UnknownEntry(id.clone()));
        }
    }
    let own = |id: &str| entry_counts.get(id).copied().unwrap_or(0);
    let mut subtree: BTreeMap<&str, u64> = BTreeMap::new();
    for e in lexicon.entries() {
        let c = own(&e.entry_id);
        if c == 0 {
            continue;
        }
        let mut cur = Some(e);
        while let Some(node) = cur {
            *subtree.entry(node.entry_id.as_str()).or_insert(0) += c;
            cur = node.parent.as_deref().and_then(|p| lexicon.entry(p));
        }
    }
    let small = |v: u64| (v as f64) / (total as f64) < threshold;

    fn build(
        id: &str,
        root: &str,
        lexicon: &Lexicon,
        subtree: &BTreeMap<&str, u64>,
        own: &dyn Fn(&str) -> u64,
        small: &dyn Fn(u64) -> bool,
    ) -> SunburstNode {
        let mut children = Vec::new();
        let mut folded = 0;
        for c in lexicon.children_of(id) {
            let v = subtree.get(c.entry_id.as_str()).copied().unwrap_or(0);
            if v == 0 {
                continue;
            }
            if small(v) {
                folded += v;
            } else {
                children.push(build(&c.entry_id, root, lexicon, subtree, own, small));
            }
        }
        if folded > 0 {
            children.push(SunburstNode {
                entry_id: format!("{id}/{OTHER}"),
                label: OTHER.into(),
                value: folded,
                own_count: folded,
                children: vec![],
                color_key: root.to_string(),
            });
        }
        order(&mut children);
        SunburstNode {
            entry_id: id.to_string(),
            label: id.to_string(),
            value: subtree[id],
            own_count: own(id),
            children,
            color_key: root.to_string(),
        }
    }

    let mut roots = Vec::new();
    let mut top_other = 0;
    for e in lexicon.entries().filter(|e| e.parent.is_none()) {
        let v = subtree.get(e.entry_id.as_str()).copied().unwrap_or(0);
        if v == 0 {
            continue;
        }
        if small(v) {
            top_other += v;
            continue;
        }
        roots.push(build(&e.entry_id, &e.entry_id, lexicon, &subtree, &own, &small));
    }
    if top_other > 0 {
        roots.push(SunburstNode {
            entry_id: OTHER.into(),
            label: OTHER.into(),
            value: top_other,
            own_count: top_other,
            children: vec![],
            color_key: OTHER.into(),
        });
    }
    order(&mut roots);
    Ok(SunburstChart {
        scope,
        total,
        threshold,
        roots,
    })
}
