use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ks_two_sample, ConferenceRef, ConferenceStats, KsMethod, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// `N^L`
    NL,
    /// `N`
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SignificanceBucket {
    #[serde(rename = "ns")]
    Ns,
    #[serde(rename = "p<0.05")]
    P05,
    #[serde(rename = "p<0.01")]
    P01,
    #[serde(rename = "p<0.001")]
    P001,
}

impl SignificanceBucket {
    pub fn of(p: f64) -> Self {
        if p < 0.001 {
            Self::P001
        } else if p < 0.01 {
            Self::P01
        } else if p < 0.05 {
            Self::P05
        } else {
            Self::Ns
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Ns => "ns",
            Self::P05 => "p<0.05",
            Self::P01 => "p<0.01",
            Self::P001 => "p<0.001",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseCell {
    pub row: ConferenceRef,
    pub col: ConferenceRef,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub method: KsMethod,
    /// Column mean minus row mean.
    pub mean_diff: f64,
    pub significance_bucket: SignificanceBucket,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseMatrix {
    pub metric: Metric,
    pub conferences: Vec<ConferenceRef>,
    /// Upper triangle, row-major.
    pub cells: Vec<PairwiseCell>,
}

fn sample(c: &ConferenceStats, metric: Metric) -> (Vec<f64>, f64) {
    match metric {
        Metric::NL => (c.n_l_sample(), c.mean_n_l),
        Metric::N => (c.n_sample(), c.mean_n),
    }
}

/// K-S test for every earlier/later pair of `conferences`.
pub fn pairwise_matrix(conferences: &[ConferenceStats], metric: Metric) -> Result<PairwiseMatrix, StatsError> {
    if conferences.len() < 2 {
        return Err(StatsError::TooFewConferences(conferences.len()));
    }
    let pairs: Vec<(usize, usize)> = (0..conferences.len())
        .flat_map(|i| (i + 1..conferences.len()).map(move |j| (i, j)))
        .collect();
    let cells = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, mean_a) = sample(&conferences[i], metric);
            let (b, mean_b) = sample(&conferences[j], metric);
            let r = ks_two_sample(&a, &b)?;
            Ok(PairwiseCell {
                row: conferences[i].key.clone(),
                col: conferences[j].key.clone(),
                ks_statistic: r.statistic,
                p_value: r.p_value,
                method: r.method,
                mean_diff: mean_b - mean_a,
                significance_bucket: SignificanceBucket::of(r.p_value),
            })
        })
        .collect::<Result<Vec<_>, StatsError>>()?;
    Ok(PairwiseMatrix {
        metric,
        conferences: conferences.iter().map(|c| c.key.clone()).collect(),
        cells,
    })
}
