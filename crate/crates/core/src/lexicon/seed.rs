use super::{parse_lexicon_str, Lexicon};

/// The seed dictionary: every known model name as its own root entry.
pub const SEED_LEXICON_TOML: &str = include_str!("../../data/seed_lexicon.toml");

/// Curated demo subset with aliases, variations and dependency links.
pub const DEMO_LEXICON_TOML: &str = include_str!("../../data/demo_lexicon.toml");

pub fn seed_lexicon() -> Lexicon {
    parse_lexicon_str(SEED_LEXICON_TOML).expect("bundled seed lexicon is valid")
}

pub fn demo_lexicon() -> Lexicon {
    parse_lexicon_str(DEMO_LEXICON_TOML).expect("bundled demo lexicon is valid")
}
