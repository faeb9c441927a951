//! Ingestion of pre-extracted text, bypassing PDF handling.
//!
//! Layout: one directory per conference named `<VENUE>-<YEAR>`, holding one
//! `<paper_id>.txt` per paper (raw page text, form-feed separated) and an
//! optional `papers.jsonl` with `{"paper_id", "title", "abstract"}` lines.
//! Papers without a metadata line get their id as title and an empty abstract.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::fetch::ListedPaper;
use super::{extract_body, CorpusError, ExtractionOptions, ExtractionWarning, Paper, PaperMeta};

#[derive(Debug, Clone, Default)]
pub struct TextIngest {
    pub papers: Vec<Paper>,
    pub warnings: Vec<(String, ExtractionWarning)>,
}

pub fn ingest_text_dir(dir: &Path, options: &ExtractionOptions) -> Result<TextIngest, CorpusError> {
    let input = |path: &Path, message: String| CorpusError::Input {
        path: path.display().to_string(),
        message,
    };
    let mut conf_dirs: Vec<_> = fs::read_dir(dir)
        .map_err(|e| input(dir, e.to_string()))?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    conf_dirs.sort();
    if conf_dirs.is_empty() {
        return Err(input(dir, "no <VENUE>-<YEAR> conference directories".into()));
    }
    let mut out = TextIngest::default();
    for conf in conf_dirs {
        let name = conf.file_name().unwrap_or_default().to_string_lossy().to_string();
        let (venue, year) = name
            .rsplit_once('-')
            .and_then(|(v, y)| Some((v.to_string(), y.parse::<i32>().ok()?)))
            .filter(|(v, _)| !v.is_empty())
            .ok_or_else(|| input(&conf, "directory name must be <VENUE>-<YEAR>".into()))?;

        let mut listed: HashMap<String, ListedPaper> = HashMap::new();
        let meta_path = conf.join("papers.jsonl");
        if meta_path.exists() {
            let text = fs::read_to_string(&meta_path).map_err(|e| input(&meta_path, e.to_string()))?;
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let p: ListedPaper =
                    serde_json::from_str(line).map_err(|e| input(&meta_path, format!("line {}: {e}", i + 1)))?;
                listed.insert(p.paper_id.clone(), p);
            }
        }

        let mut files: Vec<_> = fs::read_dir(&conf)
            .map_err(|e| input(&conf, e.to_string()))?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        for file in files {
            let paper_id = file.file_stem().unwrap_or_default().to_string_lossy().to_string();
            let raw = fs::read_to_string(&file).map_err(|e| input(&file, e.to_string()))?;
            let extracted = extract_body(&raw, options);
            let listed = listed.remove(&paper_id);
            out.warnings
                .extend(extracted.warnings.into_iter().map(|w| (paper_id.clone(), w)));
            out.papers.push(Paper {
                meta: PaperMeta {
                    title: listed.as_ref().map_or_else(|| paper_id.clone(), |l| l.title.clone()),
                    abstract_text: listed.as_ref().map(|l| l.abstract_text.clone()).unwrap_or_default(),
                    source_url: listed.and_then(|l| l.source_url),
                    paper_id,
                    venue: venue.clone(),
                    year,
                    ordinal: 0,
                },
                body_text: extracted.body_text,
                sections: extracted.sections,
            });
        }
    }
    Ok(out)
}
