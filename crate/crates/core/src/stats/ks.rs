//! Two-sample Kolmogorov-Smirnov test.
//!
//! The statistic is the sup-distance between the two empirical CDFs. The
//! p-value is two-sided. Small samples (`|a|·|b| <= EXACT_LIMIT`) use the
//! exact permutation distribution of the statistic conditional on the pooled
//! sample, ties included; larger ones use the asymptotic Kolmogorov
//! distribution at `λ = (√nₑ + 0.12 + 0.11/√nₑ)·D`, `nₑ = nm/(n+m)`.

use serde::{Deserialize, Serialize};

use super::StatsError;

/// Above this many cells the lattice-path computation gives way to the
/// asymptotic formula.
pub const EXACT_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KsMethod {
    Exact,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub method: KsMethod,
}

/// Sorted copy; NaN is rejected by the caller.
fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    v
}

/// `max |i·m − j·n|` over the pooled tie-block ends, i.e. `D·n·m` as an
/// integer, where `i`, `j` count elements of `a`, `b` at or below each value.
fn scaled_statistic(a: &[f64], b: &[f64]) -> u64 {
    let (n, m) = (a.len() as i64, b.len() as i64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = 0i64;
    while i < a.len() || j < b.len() {
        let v = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        best = best.max((i as i64 * m - j as i64 * n).abs());
    }
    best as u64
}

fn check(a: &[f64], b: &[f64]) -> Result<(), StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(StatsError::NanSample);
    }
    Ok(())
}

/// The statistic `D` alone.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    check(a, b)?;
    let (a, b) = (sorted(a), sorted(b));
    Ok(scaled_statistic(&a, &b) as f64 / (a.len() as f64 * b.len() as f64))
}

/// `P(D' >= D)` over all relabellings of the pooled sample.
///
/// Walks the `n × m` lattice; a path is one assignment of pooled positions to
/// `a`. Cells are normalised by `C(i+j, i)` so values stay in `[0, 1]`.
fn exact_p(a: &[f64], b: &[f64], d_scaled: u64) -> f64 {
    let (n, m) = (a.len(), b.len());
    // tie-block ends in the pooled order, indexed by i + j
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(|x, y| x.partial_cmp(y).expect("no NaN"));
    let total = n + m;
    let mut block_end = vec![false; total + 1];
    for k in 1..=total {
        block_end[k] = k == total || pooled[k - 1] != pooled[k];
    }
    let (ni, mi) = (n as i64, m as i64);
    let inside = |i: usize, j: usize| -> bool {
        let k = i + j;
        !block_end[k] || ((i as i64 * mi - j as i64 * ni).unsigned_abs() < d_scaled)
    };
    let mut row = vec![0.0f64; m + 1];
    row[0] = 1.0;
    for j in 1..=m {
        row[j] = if inside(0, j) { row[j - 1] } else { 0.0 };
    }
    for i in 1..=n {
        row[0] = if inside(i, 0) { row[0] } else { 0.0 };
        for j in 1..=m {
            let k = (i + j) as f64;
            let v = (i as f64 / k) * row[j] + (j as f64 / k) * row[j - 1];
            row[j] = if inside(i, j) { v } else { 0.0 };
        }
    }
    (1.0 - row[m]).clamp(0.0, 1.0)
}

/// Survival function of the Kolmogorov distribution, `P(K > λ)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-transformed series, fast for small λ
        let s = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let q = (-std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        let mut sum = 0.0;
        for k in 1..=50u32 {
            let e = ((2 * k - 1) as f64).powi(2);
            let term = q.powf(e);
            sum += term;
            if term < 1e-18 {
                break;
            }
        }
        (1.0 - s * sum).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        for k in 1..=100u32 {
            let term = (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

/// Asymptotic p-value with the small-sample correction on `λ`.
pub fn asymptotic_p(d: f64, n: usize, m: usize) -> f64 {
    if d <= 0.0 {
        return 1.0;
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let s = ne.sqrt();
    kolmogorov_survival((s + 0.12 + 0.11 / s) * d)
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    check(a, b)?;
    let (sa, sb) = (sorted(a), sorted(b));
    let (n, m) = (sa.len(), sb.len());
    let d_scaled = scaled_statistic(&sa, &sb);
    let statistic = d_scaled as f64 / (n as f64 * m as f64);
    if d_scaled == 0 {
        return Ok(KsResult {
            statistic: 0.0,
            p_value: 1.0,
            method: if n * m <= EXACT_LIMIT {
                KsMethod::Exact
            } else {
                KsMethod::Asymptotic
            },
        });
    }
    Ok(if n * m <= EXACT_LIMIT {
        KsResult {
            statistic,
            p_value: exact_p(&sa, &sb, d_scaled),
            method: KsMethod::Exact,
        }
    } else {
        KsResult {
            statistic,
            p_value: asymptotic_p(statistic, n, m),
            method: KsMethod::Asymptotic,
        }
    })
}
