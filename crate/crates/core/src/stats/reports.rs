//! One JSON file per analysis, consumed by the report module.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    composition, composition_diff, estimated_mean, jaccard, majority_rates, pairwise_matrix, quartile_split,
    ComponentDelta, CompositionScope, CompositionVector, ConferenceRef, ConferenceStats, JaccardMode, MajorityReport,
    Metric, PairwiseMatrix, QuartileSplit, Selector, StatsError,
};
use crate::jsonl::write_atomic;
use crate::lexicon::Lexicon;

pub const STATS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Timeseries,
    Ks,
    Composition,
    Jaccard,
    Majority,
    Quartiles,
}

impl Analysis {
    pub const ALL: [Analysis; 6] = [
        Analysis::Timeseries,
        Analysis::Ks,
        Analysis::Composition,
        Analysis::Jaccard,
        Analysis::Majority,
        Analysis::Quartiles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Timeseries => "timeseries",
            Self::Ks => "ks",
            Self::Composition => "composition",
            Self::Jaccard => "jaccard",
            Self::Majority => "majority",
            Self::Quartiles => "quartiles",
        }
    }
}

impl FromStr for Analysis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown analysis {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub jaccard_modes: Vec<JaccardMode>,
    /// Count model-free papers as no-majority instead of dropping them.
    pub include_zero_majority: bool,
    pub diff_top_k: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            jaccard_modes: vec![JaccardMode::Set, JaccardMode::Weighted],
            include_zero_majority: false,
            diff_top_k: 10,
        }
    }
}

/// A scope an analysis could not cover, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedScope {
    pub scope: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeseriesPoint {
    pub conference: ConferenceRef,
    pub paper_count: usize,
    pub lm_related_count: usize,
    pub prop_lm_related: f64,
    pub mean_n_l: f64,
    pub mean_n: f64,
    /// Baseline mean scaled by this conference's LM-related share.
    pub estimated_mean_n_l: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeseriesReport {
    pub baseline: ConferenceRef,
    pub points: Vec<TimeseriesPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub matrices: Vec<PairwiseMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub compositions: Vec<CompositionVector>,
    pub skipped: Vec<SkippedScope>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JaccardCell {
    pub row: ConferenceRef,
    pub col: ConferenceRef,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JaccardReport {
    pub mode: JaccardMode,
    pub conferences: Vec<ConferenceRef>,
    /// Full square matrix, row-major.
    pub cells: Vec<JaccardCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConferenceMajority {
    pub conference: ConferenceRef,
    pub all: Option<MajorityReport>,
    pub top_quarter: Option<MajorityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorityFile {
    pub include_zero: bool,
    pub conferences: Vec<ConferenceMajority>,
    pub skipped: Vec<SkippedScope>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuartileContrast {
    pub conference: ConferenceRef,
    pub split: QuartileSplit,
    pub q4_plus: CompositionVector,
    pub q1_minus: CompositionVector,
    /// `Q4⁺ − Q1⁻`, top-k by magnitude.
    pub diff: Vec<ComponentDelta>,
}

/// First-to-last conference change within each quarter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverYears {
    pub from: ConferenceRef,
    pub to: ConferenceRef,
    pub q4_plus: Vec<ComponentDelta>,
    pub q1_minus: Vec<ComponentDelta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuartileReport {
    pub contrasts: Vec<QuartileContrast>,
    pub over_years: Option<OverYears>,
    pub skipped: Vec<SkippedScope>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "analysis", rename_all = "snake_case")]
pub enum StatsReport {
    Timeseries(TimeseriesReport),
    Ks(KsReport),
    Composition(CompositionReport),
    Jaccard(JaccardReport),
    Majority(MajorityFile),
    Quartiles(QuartileReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: StatsReport,
}

impl StatsFile {
    pub fn new(report: StatsReport) -> Self {
        Self {
            schema_version: STATS_SCHEMA_VERSION,
            report,
        }
    }

    pub fn file_name(&self) -> String {
        match &self.report {
            StatsReport::Timeseries(_) => "timeseries.json".into(),
            StatsReport::Ks(_) => "ks.json".into(),
            StatsReport::Composition(_) => "composition.json".into(),
            StatsReport::Jaccard(j) => format!("jaccard_{}.json", j.mode.name()),
            StatsReport::Majority(_) => "majority.json".into(),
            StatsReport::Quartiles(_) => "quartiles.json".into(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("stats serialize");
        s.push('\n');
        s
    }

    pub fn write_to(&self, dir: &Path) -> Result<std::path::PathBuf, StatsError> {
        let path = dir.join(self.file_name());
        let io = |e: std::io::Error| StatsError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        fs::create_dir_all(dir).map_err(io)?;
        write_atomic(&path, self.to_json().as_bytes()).map_err(io)?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self, StatsError> {
        let text = fs::read_to_string(path).map_err(|e| StatsError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let malformed = |message: String| StatsError::Malformed {
            path: path.display().to_string(),
            message,
        };
        let raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
        match raw.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == STATS_SCHEMA_VERSION as u64 => {}
            Some(v) => return Err(malformed(format!("unsupported schema_version {v}"))),
            None => return Err(malformed("missing schema_version".into())),
        }
        serde_json::from_value(raw).map_err(|e| malformed(e.to_string()))
    }
}

/// Every stats file found in one directory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatsBundle {
    pub timeseries: Option<TimeseriesReport>,
    pub ks: Option<KsReport>,
    pub composition: Option<CompositionReport>,
    pub jaccard: Vec<JaccardReport>,
    pub majority: Option<MajorityFile>,
    pub quartiles: Option<QuartileReport>,
}

impl StatsBundle {
    pub fn add(&mut self, file: StatsFile) {
        match file.report {
            StatsReport::Timeseries(r) => self.timeseries = Some(r),
            StatsReport::Ks(r) => self.ks = Some(r),
            StatsReport::Composition(r) => self.composition = Some(r),
            StatsReport::Jaccard(r) => {
                self.jaccard.retain(|j| j.mode != r.mode);
                self.jaccard.push(r);
                self.jaccard.sort_by_key(|j| j.mode.name());
            }
            StatsReport::Majority(r) => self.majority = Some(r),
            StatsReport::Quartiles(r) => self.quartiles = Some(r),
        }
    }

    /// Loads `*.json` stats files from `dir`; other files are ignored.
    pub fn load(dir: &Path) -> Result<Self, StatsError> {
        let io = |e: std::io::Error| StatsError::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        };
        let mut names: Vec<_> = fs::read_dir(dir)
            .map_err(io)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()
            .map_err(io)?;
        names.sort();
        let mut bundle = Self::default();
        for path in names {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
            let known = stem.starts_with("jaccard_") || Analysis::from_str(stem).is_ok();
            if path.extension().is_some_and(|e| e == "json") && known {
                bundle.add(StatsFile::read(&path)?);
            }
        }
        Ok(bundle)
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

fn skip(scope: impl ToString, e: StatsError) -> SkippedScope {
    SkippedScope {
        scope: scope.to_string(),
        reason: e.to_string(),
    }
}

fn timeseries(confs: &[ConferenceStats]) -> Result<TimeseriesReport, StatsError> {
    let baseline = confs.first().ok_or(StatsError::TooFewConferences(0))?;
    let points = confs
        .iter()
        .map(|c| TimeseriesPoint {
            conference: c.key.clone(),
            paper_count: c.paper_count,
            lm_related_count: c.lm_related_count,
            prop_lm_related: c.prop_lm_related,
            mean_n_l: c.mean_n_l,
            mean_n: c.mean_n,
            estimated_mean_n_l: estimated_mean(baseline, c.prop_lm_related).ok(),
        })
        .collect();
    Ok(TimeseriesReport {
        baseline: baseline.key.clone(),
        points,
    })
}

fn compositions(confs: &[ConferenceStats], lexicon: &Lexicon) -> Result<CompositionReport, StatsError> {
    let mut out = CompositionReport {
        compositions: vec![],
        skipped: vec![],
    };
    for c in confs {
        match composition(CompositionScope::whole(c.key.clone()), &c.counts, lexicon) {
            Ok(v) => out.compositions.push(v),
            Err(e @ StatsError::ZeroTotal(_)) => out.skipped.push(skip(&c.key, e)),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn jaccard_matrix(comps: &[CompositionVector], mode: JaccardMode) -> JaccardReport {
    let mut cells = Vec::with_capacity(comps.len() * comps.len());
    for a in comps {
        for b in comps {
            cells.push(JaccardCell {
                row: a.scope.conference.clone(),
                col: b.scope.conference.clone(),
                value: jaccard(a, b, mode),
            });
        }
    }
    JaccardReport {
        mode,
        conferences: comps.iter().map(|c| c.scope.conference.clone()).collect(),
        cells,
    }
}

fn majority(confs: &[ConferenceStats], lexicon: &Lexicon, include_zero: bool) -> Result<MajorityFile, StatsError> {
    let mut out = MajorityFile {
        include_zero,
        conferences: vec![],
        skipped: vec![],
    };
    for c in confs {
        let mut row = ConferenceMajority {
            conference: c.key.clone(),
            all: None,
            top_quarter: None,
        };
        for sel in [Selector::All, Selector::TopQuarter] {
            match majority_rates(c, sel, lexicon, include_zero) {
                Ok(r) if sel == Selector::All => row.all = Some(r),
                Ok(r) => row.top_quarter = Some(r),
                Err(e @ (StatsError::NoCountedPapers(_) | StatsError::TooFewForQuartiles { .. })) => {
                    out.skipped.push(skip(format!("{}/{}", c.key, sel.tag()), e))
                }
                Err(e) => return Err(e),
            }
        }
        out.conferences.push(row);
    }
    Ok(out)
}

fn quartiles(confs: &[ConferenceStats], lexicon: &Lexicon, top_k: usize) -> Result<QuartileReport, StatsError> {
    let mut out = QuartileReport {
        contrasts: vec![],
        over_years: None,
        skipped: vec![],
    };
    for c in confs {
        let split = match quartile_split(c) {
            Ok(s) => s,
            Err(e @ StatsError::TooFewForQuartiles { .. }) => {
                out.skipped.push(skip(&c.key, e));
                continue;
            }
            Err(e) => return Err(e),
        };
        let pick =
            |ids: &[String]| -> Vec<_> { c.counts.iter().filter(|p| ids.contains(&p.paper_id)).cloned().collect() };
        let q4 = composition(
            CompositionScope::subset(c.key.clone(), "q4_plus"),
            &pick(&split.q4_plus),
            lexicon,
        );
        let q1 = composition(
            CompositionScope::subset(c.key.clone(), "q1_minus"),
            &pick(&split.q1_minus),
            lexicon,
        );
        match (q4, q1) {
            (Ok(q4), Ok(q1)) => out.contrasts.push(QuartileContrast {
                conference: c.key.clone(),
                diff: composition_diff(&q4, &q1, Some(top_k)),
                split,
                q4_plus: q4,
                q1_minus: q1,
            }),
            (Err(e @ StatsError::ZeroTotal(_)), _) | (_, Err(e @ StatsError::ZeroTotal(_))) => {
                out.skipped.push(skip(&c.key, e))
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    if let [first, .., last] = out.contrasts.as_slice() {
        out.over_years = Some(OverYears {
            from: first.conference.clone(),
            to: last.conference.clone(),
            q4_plus: composition_diff(&last.q4_plus, &first.q4_plus, Some(top_k)),
            q1_minus: composition_diff(&last.q1_minus, &first.q1_minus, Some(top_k)),
        });
    }
    Ok(out)
}

/// Runs one analysis over conferences in time order. Jaccard yields one file
/// per requested mode.
pub fn compute_report(
    analysis: Analysis,
    confs: &[ConferenceStats],
    lexicon: &Lexicon,
    options: &AnalysisOptions,
) -> Result<Vec<StatsFile>, StatsError> {
    let files = match analysis {
        Analysis::Timeseries => vec![StatsReport::Timeseries(timeseries(confs)?)],
        Analysis::Ks => vec![StatsReport::Ks(KsReport {
            matrices: vec![pairwise_matrix(confs, Metric::NL)?, pairwise_matrix(confs, Metric::N)?],
        })],
        Analysis::Composition => vec![StatsReport::Composition(compositions(confs, lexicon)?)],
        Analysis::Jaccard => {
            let comps = compositions(confs, lexicon)?.compositions;
            options
                .jaccard_modes
                .iter()
                .map(|&m| StatsReport::Jaccard(jaccard_matrix(&comps, m)))
                .collect()
        }
        Analysis::Majority => vec![StatsReport::Majority(majority(
            confs,
            lexicon,
            options.include_zero_majority,
        )?)],
        Analysis::Quartiles => vec![StatsReport::Quartiles(quartiles(confs, lexicon, options.diff_top_k)?)],
    };
    Ok(files.into_iter().map(StatsFile::new).collect())
}
