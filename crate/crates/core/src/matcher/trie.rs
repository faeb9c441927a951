use std::collections::BTreeMap;

use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Default)]
struct Node {
    // sorted by byte
    edges: Vec<(u8, u32)>,
    // index into `entry_ids`
    terminal: Option<u32>,
}

impl Node {
    fn next(&self, b: u8) -> Option<u32> {
        self.edges
            .binary_search_by_key(&b, |e| e.0)
            .ok()
            .map(|i| self.edges[i].1)
    }
}

/// One attributed alias occurrence: `text[start..end]` counted for `entry`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasMatch<'m> {
    pub start: usize,
    pub end: usize,
    pub entry: &'m str,
}

/// Byte trie over every alias in a lexicon, scanned leftmost-longest.
#[derive(Debug, Clone)]
pub struct ModelMatcher {
    nodes: Vec<Node>,
    entry_ids: Vec<String>,
}

impl ModelMatcher {
    pub fn new(lexicon: &Lexicon) -> Self {
        let mut nodes = vec![Node::default()];
        let mut entry_ids = Vec::with_capacity(lexicon.len());
        for entry in lexicon.entries() {
            let idx = entry_ids.len() as u32;
            entry_ids.push(entry.entry_id.clone());
            for alias in &entry.aliases {
                let mut cur = 0usize;
                for &b in alias.as_bytes() {
                    cur = match nodes[cur].next(b) {
                        Some(n) => n as usize,
                        None => {
                            let n = nodes.len() as u32;
                            nodes.push(Node::default());
                            let edges = &mut nodes[cur].edges;
                            let pos = edges.partition_point(|e| e.0 < b);
                            edges.insert(pos, (b, n));
                            n as usize
                        }
                    };
                }
                // aliases are globally unique, so no terminal is overwritten
                nodes[cur].terminal = Some(idx);
            }
        }
        Self { nodes, entry_ids }
    }

    /// Longest alias starting exactly at `at`: (length, entry index).
    fn longest_at(&self, hay: &[u8], at: usize) -> Option<(usize, u32)> {
        let mut cur = 0usize;
        let mut best = None;
        for (k, &b) in hay[at..].iter().enumerate() {
            match self.nodes[cur].next(b) {
                Some(n) => cur = n as usize,
                None => break,
            }
            if let Some(t) = self.nodes[cur].terminal {
                best = Some((k + 1, t));
            }
        }
        best
    }

    /// Every attributed match, in text order. Spans never overlap.
    pub fn find_all<'m>(&'m self, text: &str) -> Vec<AliasMatch<'m>> {
        let hay = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < hay.len() {
            if i == 0 || !hay[i - 1].is_ascii_alphabetic() {
                if let Some((len, idx)) = self.longest_at(hay, i) {
                    out.push(AliasMatch {
                        start: i,
                        end: i + len,
                        entry: &self.entry_ids[idx as usize],
                    });
                    i += len;
                    continue;
                }
            }
            i += 1;
        }
        out
    }

    pub fn count(&self, text: &str) -> BTreeMap<String, u64> {
        let mut counts = BTreeMap::new();
        for m in self.find_all(text) {
            *counts.entry(m.entry.to_string()).or_insert(0) += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{LTermSet, ModelEntry};

    #[test]
    fn spans_are_disjoint_and_attributed() {
        let lex = Lexicon::new(
            LTermSet::default(),
            vec![
                ModelEntry::new("GPT"),
                ModelEntry::new("GPT-3").with_aliases(["GPT3"]),
                ModelEntry::new("GPT-3.5"),
            ],
        )
        .unwrap();
        let m = ModelMatcher::new(&lex);
        let found = m.find_all("GPT-3.5, GPT3 and GPT-4");
        let got: Vec<_> = found.iter().map(|m| (m.start, m.end, m.entry)).collect();
        assert_eq!(got, vec![(0, 7, "GPT-3.5"), (9, 13, "GPT-3"), (18, 21, "GPT")]);
    }

    #[test]
    fn non_ascii_text_is_safe() {
        let lex = Lexicon::new(LTermSet::default(), vec![ModelEntry::new("BERT")]).unwrap();
        let m = ModelMatcher::new(&lex);
        assert_eq!(m.count("ÉBERT «BERT» 日本BERT")["BERT"], 3);
    }
}
