//! Chart data and standalone SVG for every stats analysis.
//!
//! Rendering is a pure function of chart data and [`Style`]; the output
//! directory gets one data file and one SVG per chart plus a checksum
//! manifest.

mod charts;
mod sunburst;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::jsonl::write_atomic;
use crate::lexicon::Lexicon;
use crate::stats::{JaccardReport, PairwiseMatrix, Selector, StatsBundle, TimeseriesReport};

pub use charts::{DivergingChart, MajorityChart, Style};
pub use sunburst::{sunburst_data, SunburstChart, SunburstNode, DEFAULT_THRESHOLD};
pub use svg::{ColorMap, NEUTRAL, PALETTE};

pub const CHART_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("scope {0} has no model mentions")]
    EmptyScope(String),
    #[error("entry {0:?} is not in the lexicon")]
    UnknownEntry(String),
    #[error("{kind} data does not match its schema: {message}")]
    Schema { kind: &'static str, message: String },
    #[error("output directory {0} is not empty (use --force to overwrite)")]
    OutputNotEmpty(String),
    #[error("no stats files to report on")]
    NoStats,
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    Timeseries,
    KsHeatmap,
    Sunburst,
    Jaccard,
    Majority,
    QuartileDiff,
}

impl ChartKind {
    pub const ALL: [ChartKind; 6] = [
        ChartKind::Timeseries,
        ChartKind::KsHeatmap,
        ChartKind::Sunburst,
        ChartKind::Jaccard,
        ChartKind::Majority,
        ChartKind::QuartileDiff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Timeseries => "timeseries",
            Self::KsHeatmap => "ks_heatmap",
            Self::Sunburst => "sunburst",
            Self::Jaccard => "jaccard",
            Self::Majority => "majority",
            Self::QuartileDiff => "quartile_diff",
        }
    }
}

fn typed<T: serde::de::DeserializeOwned>(kind: ChartKind, data: &serde_json::Value) -> Result<T, ReportError> {
    serde_json::from_value(data.clone()).map_err(|e| ReportError::Schema {
        kind: kind.name(),
        message: e.to_string(),
    })
}

/// Renders untyped chart data; a schema mismatch names the offending field.
pub fn render(kind: ChartKind, data: &serde_json::Value, style: &Style) -> Result<String, ReportError> {
    Ok(match kind {
        ChartKind::Timeseries => charts::timeseries(&typed::<TimeseriesReport>(kind, data)?, style),
        ChartKind::KsHeatmap => charts::heatmap(&typed::<PairwiseMatrix>(kind, data)?, style),
        ChartKind::Sunburst => charts::sunburst(&typed::<SunburstChart>(kind, data)?, style),
        ChartKind::Jaccard => charts::jaccard(&typed::<JaccardReport>(kind, data)?, style),
        ChartKind::Majority => charts::majority(&typed::<MajorityChart>(kind, data)?, style),
        ChartKind::QuartileDiff => charts::diverging(&typed::<DivergingChart>(kind, data)?, style),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartBundle {
    pub kind: ChartKind,
    pub scope: String,
    pub data: serde_json::Value,
    #[serde(skip)]
    pub svg: Option<String>,
}

impl ChartBundle {
    pub fn new(kind: ChartKind, scope: impl Into<String>, data: &impl Serialize) -> Self {
        Self {
            kind,
            scope: scope.into(),
            data: serde_json::to_value(data).expect("chart data serializes"),
            svg: None,
        }
    }

    pub fn rendered(mut self, style: &Style) -> Result<Self, ReportError> {
        self.svg = Some(render(self.kind, &self.data, style)?);
        Ok(self)
    }

    fn data_file(&self) -> String {
        #[derive(Serialize)]
        struct ChartFile<'a> {
            schema_version: u32,
            kind: ChartKind,
            scope: &'a str,
            data: &'a serde_json::Value,
        }
        let mut s = serde_json::to_string_pretty(&ChartFile {
            schema_version: CHART_SCHEMA_VERSION,
            kind: self.kind,
            scope: &self.scope,
            data: &self.data,
        })
        .expect("chart file serializes");
        s.push('\n');
        s
    }
}

/// File-name-safe form of a scope label.
fn slug(scope: &str) -> String {
    scope
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Every chart the bundle supports, in a fixed order.
pub fn build_charts(bundle: &StatsBundle, lexicon: &Lexicon, threshold: f64) -> Result<Vec<ChartBundle>, ReportError> {
    let mut out = Vec::new();
    if let Some(t) = &bundle.timeseries {
        out.push(ChartBundle::new(ChartKind::Timeseries, "all", t));
    }
    if let Some(ks) = &bundle.ks {
        for m in &ks.matrices {
            let scope = match m.metric {
                crate::stats::Metric::NL => "n_l",
                crate::stats::Metric::N => "n",
            };
            out.push(ChartBundle::new(ChartKind::KsHeatmap, scope, m));
        }
    }
    if let Some(c) = &bundle.composition {
        for v in &c.compositions {
            let scope = v.scope.to_string();
            out.push(ChartBundle::new(
                ChartKind::Sunburst,
                scope.clone(),
                &sunburst_data(scope, &v.entry_counts, lexicon, threshold)?,
            ));
        }
    }
    for j in &bundle.jaccard {
        out.push(ChartBundle::new(ChartKind::Jaccard, j.mode.name(), j));
    }
    if let Some(m) = &bundle.majority {
        for sel in [Selector::All, Selector::TopQuarter] {
            let bars: Vec<_> = m
                .conferences
                .iter()
                .filter_map(|c| match sel {
                    Selector::All => c.all.clone(),
                    Selector::TopQuarter => c.top_quarter.clone(),
                })
                .collect();
            if !bars.is_empty() {
                out.push(ChartBundle::new(
                    ChartKind::Majority,
                    sel.tag(),
                    &MajorityChart { selector: sel, bars },
                ));
            }
        }
    }
    if let Some(q) = &bundle.quartiles {
        for c in &q.contrasts {
            out.push(ChartBundle::new(
                ChartKind::QuartileDiff,
                c.conference.to_string(),
                &DivergingChart {
                    title: format!("Q4+ minus Q1- composition, {}", c.conference),
                    deltas: c.diff.clone(),
                },
            ));
        }
        if let Some(o) = &q.over_years {
            for (tag, deltas) in [("q4_plus", &o.q4_plus), ("q1_minus", &o.q1_minus)] {
                out.push(ChartBundle::new(
                    ChartKind::QuartileDiff,
                    format!("over_years_{tag}"),
                    &DivergingChart {
                        title: format!("{tag} composition change, {} to {}", o.from, o.to),
                        deltas: deltas.clone(),
                    },
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn kinds(&self) -> Vec<String> {
        let mut k: Vec<String> = self
            .files
            .iter()
            .filter_map(|f| f.path.split('/').next().map(str::to_string))
            .collect();
        k.dedup();
        k
    }

    pub fn read(path: &Path) -> Result<Self, ReportError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| ReportError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

fn io_err(path: &Path, e: std::io::Error) -> ReportError {
    ReportError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Renders all charts for `bundle` into `out_dir`.
///
/// A non-empty `out_dir` is refused unless `force`; with `force`, files named
/// by a previous manifest are removed first so stale charts do not linger.
pub fn emit_all(
    bundle: &StatsBundle,
    lexicon: &Lexicon,
    out_dir: &Path,
    style: &Style,
    force: bool,
) -> Result<Manifest, ReportError> {
    if bundle.is_empty() {
        return Err(ReportError::NoStats);
    }
    let style = Style {
        colors: ColorMap::new(
            lexicon
                .entries()
                .filter(|e| e.parent.is_none())
                .map(|e| e.entry_id.clone()),
        ),
        ..style.clone()
    };
    let charts = build_charts(bundle, lexicon, DEFAULT_THRESHOLD)?
        .into_iter()
        .map(|c| c.rendered(&style))
        .collect::<Result<Vec<_>, _>>()?;

    let occupied = out_dir.exists() && fs::read_dir(out_dir).map_err(|e| io_err(out_dir, e))?.next().is_some();
    if occupied {
        if !force {
            return Err(ReportError::OutputNotEmpty(out_dir.display().to_string()));
        }
        let old = out_dir.join(MANIFEST_NAME);
        if let Ok(m) = Manifest::read(&old) {
            for f in m.files {
                let p = out_dir.join(&f.path);
                if p.starts_with(out_dir) && !f.path.contains("..") {
                    let _ = fs::remove_file(p);
                }
            }
        }
    }
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;

    let mut files = Vec::new();
    for c in &charts {
        let dir: PathBuf = out_dir.join(c.kind.name());
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        let stem = slug(&c.scope);
        let svg = c.svg.as_deref().expect("rendered above");
        for (ext, body) in [("json", c.data_file()), ("svg", svg.to_string())] {
            let name = format!("{stem}.{ext}");
            let path = dir.join(&name);
            write_atomic(&path, body.as_bytes()).map_err(|e| io_err(&path, e))?;
            files.push(ManifestEntry {
                path: format!("{}/{name}", c.kind.name()),
                sha256: sha256_hex(body.as_bytes()),
                bytes: body.len() as u64,
            });
        }
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest {
        schema_version: CHART_SCHEMA_VERSION,
        files,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    let mpath = out_dir.join(MANIFEST_NAME);
    write_atomic(&mpath, text.as_bytes()).map_err(|e| io_err(&mpath, e))?;
    Ok(manifest)
}
