//! Raw page text to body text: footer removal, references cut, headings.
//!
//! Pages in raw text are separated by form feeds (`\x0c`), which is what most
//! PDF-to-text tools emit.

use std::collections::HashMap;
use std::fmt;

use super::Section;

const PAGE_BREAK: char = '\x0c';

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionOptions {
    /// A line is a footer when its trimmed text occurs on at least this
    /// fraction of pages, and on two pages at minimum.
    pub footer_page_fraction: f64,
    /// Extra footer lines to always drop (trimmed, exact).
    pub footer_patterns: Vec<String>,
    /// Unnumbered headings recognised by case-insensitive equality.
    pub heading_titles: Vec<String>,
    /// Headings that start the references section.
    pub reference_titles: Vec<String>,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        Self {
            footer_page_fraction: 0.5,
            footer_patterns: Vec::new(),
            heading_titles: [
                "Abstract",
                "Introduction",
                "Related Work",
                "Background",
                "Method",
                "Methods",
                "Methodology",
                "Experiments",
                "Experimental Setup",
                "Results",
                "Analysis",
                "Discussion",
                "Conclusion",
                "Conclusions",
                "Limitations",
                "Ethics Statement",
                "Ethical Considerations",
                "Acknowledgments",
                "Acknowledgements",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            reference_titles: vec!["references".into(), "bibliography".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtractionWarning {
    EmptyInput,
    NoReferencesHeading,
}

impl fmt::Display for ExtractionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtractionWarning::EmptyInput => "empty-input",
            ExtractionWarning::NoReferencesHeading => "no-references-heading",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BodyExtraction {
    pub body_text: String,
    pub sections: Vec<Section>,
    pub warnings: Vec<ExtractionWarning>,
}

pub fn extract_body(raw_text: &str, options: &ExtractionOptions) -> BodyExtraction {
    if raw_text.trim().is_empty() {
        return BodyExtraction {
            body_text: String::new(),
            sections: Vec::new(),
            warnings: vec![ExtractionWarning::EmptyInput],
        };
    }
    let cleaned = remove_footers(raw_text, options);
    let mut warnings = Vec::new();
    let body_text = match last_references_heading(&cleaned, options) {
        Some(cut) => cleaned[..cut].to_string(),
        None => {
            warnings.push(ExtractionWarning::NoReferencesHeading);
            cleaned
        }
    };
    let sections = detect_sections(&body_text, options);
    BodyExtraction {
        body_text,
        sections,
        warnings,
    }
}

fn remove_footers(raw: &str, options: &ExtractionOptions) -> String {
    let pages: Vec<&str> = raw.split(PAGE_BREAK).collect();
    let mut page_hits: HashMap<&str, usize> = HashMap::new();
    if pages.len() >= 2 {
        for page in &pages {
            let mut seen: Vec<&str> = page.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
            seen.sort_unstable();
            seen.dedup();
            for l in seen {
                *page_hits.entry(l).or_default() += 1;
            }
        }
    }
    // a footer repeats, so it needs at least two pages whatever the fraction
    let threshold = (options.footer_page_fraction * pages.len() as f64).max(2.0);
    let is_footer = |line: &str| {
        let t = line.trim();
        !t.is_empty()
            && (options.footer_patterns.iter().any(|p| p == t)
                || page_hits.get(t).is_some_and(|&n| n as f64 >= threshold))
    };
    let mut out = String::with_capacity(raw.len());
    for (pi, page) in pages.iter().enumerate() {
        if pi > 0 {
            out.push('\n');
        }
        for seg in page.split_inclusive('\n') {
            if !is_footer(seg) {
                out.push_str(seg);
            }
        }
    }
    out
}

/// Byte offset of the start of the last references heading line.
fn last_references_heading(text: &str, options: &ExtractionOptions) -> Option<usize> {
    let mut found = None;
    let mut offset = 0;
    for seg in text.split_inclusive('\n') {
        let title = strip_section_number(seg.trim());
        if options.reference_titles.iter().any(|r| r.eq_ignore_ascii_case(title)) {
            found = Some(offset);
        }
        offset += seg.len();
    }
    found
}

/// "7 References" / "7. References" / "A.2 Setup" -> the title part.
fn strip_section_number(line: &str) -> &str {
    match split_section_number(line) {
        Some((_, rest)) => rest,
        None => line,
    }
}

fn split_section_number(line: &str) -> Option<(&str, &str)> {
    let bytes = line.as_bytes();
    let mut i = 0;
    // one leading capital letter is allowed for appendix numbering ("A.1")
    if bytes.len() > 1 && bytes[0].is_ascii_uppercase() && bytes[1] == b'.' {
        i = 2;
    }
    let digits_start = i;
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
        i += 1;
    }
    if i == digits_start && digits_start == 0 {
        return None;
    }
    if !bytes[..i].iter().any(u8::is_ascii_digit) {
        return None;
    }
    let rest = line[i..].trim_start();
    if rest.len() == line.len() - i {
        // no whitespace between number and title
        return None;
    }
    Some((&line[..i], rest))
}

fn detect_sections(body: &str, options: &ExtractionOptions) -> Vec<Section> {
    let mut out = Vec::new();
    let mut offset = 0;
    for seg in body.split_inclusive('\n') {
        let line = seg.trim();
        let lead = seg.len() - seg.trim_start().len();
        if let Some(title) = heading_title(line, options) {
            out.push(Section {
                title: title.to_string(),
                offset: offset + lead,
            });
        }
        offset += seg.len();
    }
    out
}

fn heading_title<'a>(line: &'a str, options: &ExtractionOptions) -> Option<&'a str> {
    if line.is_empty() || line.len() > 80 {
        return None;
    }
    if let Some((_, rest)) = split_section_number(line) {
        let starts_upper = rest.chars().next().is_some_and(char::is_uppercase);
        if starts_upper && !rest.ends_with('.') && rest.split_whitespace().count() <= 10 {
            return Some(line);
        }
        return None;
    }
    options
        .heading_titles
        .iter()
        .any(|t| t.eq_ignore_ascii_case(line))
        .then_some(line)
}
