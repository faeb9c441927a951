use serde::{Deserialize, Serialize};

use super::ExtractorError;

/// Static system instruction with three in-context examples.
pub const SYSTEM_PROMPT: &str = include_str!("../../data/extraction_system_prompt.txt");

const USER_PREFIX: &str = "Input: ";
const USER_SUFFIX: &str = "\nOutput: ";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionRequest {
    pub title: String,
    pub system: String,
    pub user: String,
}

/// Renders the extraction request for one paper. Only the abstract is
/// substituted into the user block; the title travels alongside for logs.
pub fn build_prompt(title: &str, abstract_text: &str) -> Result<ExtractionRequest, ExtractorError> {
    if abstract_text.trim().is_empty() {
        return Err(ExtractorError::EmptyAbstract(title.to_string()));
    }
    Ok(ExtractionRequest {
        title: title.to_string(),
        system: SYSTEM_PROMPT.to_string(),
        user: format!("{USER_PREFIX}{abstract_text}{USER_SUFFIX}"),
    })
}

/// Splits a comma-separated answer. A bare `None` (any case, optional
/// trailing period) means no models.
pub fn parse_response(raw: &str) -> Vec<String> {
    let t = raw.trim();
    if t.strip_suffix('.').unwrap_or(t).eq_ignore_ascii_case("none") {
        return Vec::new();
    }
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}
