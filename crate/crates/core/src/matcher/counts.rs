use std::path::Path;

use super::PaperCounts;
use crate::jsonl::{self, JsonlError};

pub const COUNTS_KIND: &str = "paper-counts";
pub const COUNTS_SCHEMA_VERSION: u32 = 1;

pub fn counts_to_string(counts: &[PaperCounts]) -> String {
    jsonl::to_string(COUNTS_KIND, COUNTS_SCHEMA_VERSION, counts)
}

pub fn write_counts(path: &Path, counts: &[PaperCounts]) -> Result<(), JsonlError> {
    jsonl::write(path, COUNTS_KIND, COUNTS_SCHEMA_VERSION, counts)
}

pub fn read_counts(path: &Path) -> Result<Vec<PaperCounts>, JsonlError> {
    jsonl::read(path, COUNTS_KIND, COUNTS_SCHEMA_VERSION)
}
