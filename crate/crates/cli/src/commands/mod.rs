pub mod extract;
pub mod ingest;
pub mod lexicon;
pub mod report;
pub mod scan;
pub mod stats;
pub mod triage;
