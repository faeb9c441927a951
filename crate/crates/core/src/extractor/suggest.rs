use serde::{Deserialize, Serialize};

use crate::lexicon::Lexicon;

/// Advisory classification shown to the curator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "entry", rename_all = "snake_case")]
pub enum Suggestion {
    AlreadyAlias(String),
    VariationOf(String),
    PossibleAliasOf(String),
    NewOrDiscard,
}

impl Suggestion {
    pub fn entry(&self) -> Option<&str> {
        match self {
            Suggestion::AlreadyAlias(e) | Suggestion::VariationOf(e) | Suggestion::PossibleAliasOf(e) => Some(e),
            Suggestion::NewOrDiscard => None,
        }
    }
}

pub fn suggest_classification(candidate: &str, lexicon: &Lexicon) -> Suggestion {
    if let Some(owner) = lexicon.owner_of(candidate) {
        return Suggestion::AlreadyAlias(owner.entry_id.clone());
    }
    // longest contained alias; ties go to the earlier entry in file order
    let mut best: Option<(usize, &str)> = None;
    for e in lexicon.entries() {
        for a in &e.aliases {
            if candidate.contains(a.as_str()) && best.is_none_or(|(len, _)| a.len() > len) {
                best = Some((a.len(), &e.entry_id));
            }
        }
    }
    if let Some((_, id)) = best {
        return Suggestion::VariationOf(id.to_string());
    }
    for e in lexicon.entries() {
        if e.aliases.iter().any(|a| a.eq_ignore_ascii_case(candidate)) {
            return Suggestion::PossibleAliasOf(e.entry_id.clone());
        }
    }
    Suggestion::NewOrDiscard
}
