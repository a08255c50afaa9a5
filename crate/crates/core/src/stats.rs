//! Paired nonparametric comparison and run summaries.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::record::RunRecord;

/// Largest effective sample size tested by exact enumeration.
pub const EXACT_CUTOFF: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    TwoSided,
    /// Differences tend to be negative (A < B).
    Less,
    /// Differences tend to be positive (A > B).
    Greater,
}

impl std::str::FromStr for Alternative {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "two-sided" => Ok(Self::TwoSided),
            "less" => Ok(Self::Less),
            "greater" => Ok(Self::Greater),
            other => Err(format!("unknown alternative '{other}' (two-sided, less, greater)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    NormalApproximation,
}

/// Paired differences `A - B` with zero differences removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSample {
    pub labels: (String, String),
    pub differences: Vec<f64>,
    /// Pairs dropped because their difference was zero.
    pub zeros_dropped: usize,
}

impl PairedSample {
    pub fn from_differences(labels: (String, String), differences: impl IntoIterator<Item = f64>) -> Self {
        let mut zeros_dropped = 0;
        let differences = differences
            .into_iter()
            .filter(|d| {
                let zero = *d == 0.0;
                zeros_dropped += usize::from(zero);
                !zero
            })
            .collect();
        Self { labels, differences, zeros_dropped }
    }

    /// Differences `a[i] - b[i]`.
    pub fn from_pairs(labels: (String, String), a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        Ok(Self::from_differences(labels, a.iter().zip(b).map(|(x, y)| x - y)))
    }

    pub fn len(&self) -> usize {
        self.differences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differences.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// `min(W+, W-)` for two-sided tests, `W+` for one-sided.
    pub w_statistic: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub n_effective: usize,
    pub p_value: f64,
    pub method: Method,
    pub alternative: Alternative,
}

impl fmt::Display for WilcoxonResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "W = {} (W+ = {}, W- = {}), n = {}, p = {:.6} ({:?}, {:?})",
            self.w_statistic, self.w_plus, self.w_minus, self.n_effective, self.p_value, self.method, self.alternative
        )
    }
}

/// Ranks of `|d|`, doubled so that tied (average) ranks stay integral.
pub fn doubled_ranks(differences: &[f64]) -> Vec<u64> {
    let n = differences.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| differences[a].abs().total_cmp(&differences[b].abs()));
    let mut ranks = vec![0u64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && differences[order[j + 1]].abs() == differences[order[i]].abs() {
            j += 1;
        }
        // 1-based positions i+1 ..= j+1 share the doubled rank (i + 1) + (j + 1)
        let shared = (i + j + 2) as u64;
        for &k in &order[i..=j] {
            ranks[k] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Number of sign assignments giving each doubled positive-rank sum.
fn exact_counts(ranks: &[u64]) -> Vec<u64> {
    let total: u64 = ranks.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    let mut reach = 0usize;
    for &r in ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] > 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    counts
}

fn exact_p(ranks: &[u64], w_plus_doubled: u64, alternative: Alternative) -> f64 {
    let counts = exact_counts(ranks);
    let total = 2f64.powi(ranks.len() as i32);
    let w = w_plus_doubled as usize;
    let upper = counts[w..].iter().sum::<u64>() as f64 / total;
    let lower = counts[..=w].iter().sum::<u64>() as f64 / total;
    match alternative {
        Alternative::Greater => upper,
        Alternative::Less => lower,
        Alternative::TwoSided => (2.0 * upper.min(lower)).min(1.0),
    }
}

/// Normal approximation with continuity correction and tie-corrected variance.
pub fn normal_approx_p(differences: &[f64], alternative: Alternative) -> f64 {
    let ranks = doubled_ranks(differences);
    let n = differences.len() as f64;
    let w_plus = positive_rank_sum(differences, &ranks) as f64 / 2.0;
    let mean = n * (n + 1.0) / 4.0;
    let mut ties: BTreeMap<u64, f64> = BTreeMap::new();
    for r in &ranks {
        *ties.entry(*r).or_default() += 1.0;
    }
    let tie_term: f64 = ties.values().map(|t| t * t * t - t).sum::<f64>() / 48.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term;
    if var <= 0.0 {
        return 1.0;
    }
    let sd = var.sqrt();
    let phi = Normal::standard();
    let p = match alternative {
        Alternative::Greater => phi.sf((w_plus - mean - 0.5) / sd),
        Alternative::Less => phi.cdf((w_plus - mean + 0.5) / sd),
        Alternative::TwoSided => 2.0 * phi.sf(((w_plus - mean).abs() - 0.5) / sd),
    };
    p.clamp(0.0, 1.0)
}

fn positive_rank_sum(differences: &[f64], ranks: &[u64]) -> u64 {
    differences.iter().zip(ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum()
}

/// Wilcoxon signed-rank test on paired differences.
///
/// Ties in `|d|` get average ranks. Up to [`EXACT_CUTOFF`] pairs the p-value
/// is the exact null distribution over all `2^n` sign assignments, computed
/// by counting rank-sum subsets; above it the normal approximation is used.
pub fn wilcoxon_signed_rank(sample: &PairedSample, alternative: Alternative) -> Result<WilcoxonResult> {
    let d = &sample.differences;
    if d.is_empty() {
        return Err(Error::UndefinedTest("no non-zero paired differences".into()));
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::UndefinedTest("differences must be finite".into()));
    }
    let ranks = doubled_ranks(d);
    let total: u64 = ranks.iter().sum();
    let plus = positive_rank_sum(d, &ranks);
    let (w_plus, w_minus) = (plus as f64 / 2.0, (total - plus) as f64 / 2.0);
    let (p_value, method) = if d.len() <= EXACT_CUTOFF {
        (exact_p(&ranks, plus, alternative), Method::Exact)
    } else {
        (normal_approx_p(d, alternative), Method::NormalApproximation)
    };
    Ok(WilcoxonResult {
        w_statistic: if alternative == Alternative::TwoSided { w_plus.min(w_minus) } else { w_plus },
        w_plus,
        w_minus,
        n_effective: d.len(),
        p_value,
        method,
        alternative,
    })
}

/// Field of [`RunRecord`] to group by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKey {
    Scenario,
    Algorithm,
    Seed,
}

impl GroupKey {
    fn value(self, r: &RunRecord) -> String {
        match self {
            GroupKey::Scenario => r.scenario_id.clone(),
            GroupKey::Algorithm => r.algorithm.clone(),
            GroupKey::Seed => r.seed.to_string(),
        }
    }
}

/// Summarized numeric fields of [`RunRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Coverage,
    ConnectivityRatio,
    NodeCount,
    WallTime,
    Energy,
}

impl Metric {
    pub const ALL: [Metric; 5] =
        [Metric::Coverage, Metric::ConnectivityRatio, Metric::NodeCount, Metric::WallTime, Metric::Energy];

    pub fn of(self, r: &RunRecord) -> f64 {
        match self {
            Metric::Coverage => r.coverage,
            Metric::ConnectivityRatio => r.connectivity_ratio,
            Metric::NodeCount => r.n_nodes as f64,
            Metric::WallTime => r.wall_time_s,
            Metric::Energy => r.energy_total,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Coverage => "coverage",
            Metric::ConnectivityRatio => "connectivity_ratio",
            Metric::NodeCount => "n_nodes",
            Metric::WallTime => "wall_time_s",
            Metric::Energy => "energy_total",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s || (s == "nodes" && *m == Metric::NodeCount))
            .ok_or_else(|| format!("unknown metric '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl MetricSummary {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Self {
            mean,
            sd,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            count: values.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub key: Vec<String>,
    pub count: usize,
    pub metrics: BTreeMap<Metric, MetricSummary>,
}

/// Per-group mean, sd, min, max and count of every [`Metric`]. Groups are
/// ordered by key.
pub fn summarize_runs(records: &[RunRecord], group_by: &[GroupKey]) -> Result<Vec<GroupSummary>> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no run records to summarize".into()));
    }
    let mut groups: BTreeMap<Vec<String>, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(group_by.iter().map(|k| k.value(r)).collect()).or_default().push(r);
    }
    Ok(groups
        .into_iter()
        .map(|(key, rs)| {
            let metrics = Metric::ALL
                .into_iter()
                .map(|m| {
                    let values: Vec<f64> = rs.iter().map(|r| m.of(r)).collect();
                    (m, MetricSummary::from_values(&values).expect("group is non-empty"))
                })
                .collect();
            GroupSummary { key, count: rs.len(), metrics }
        })
        .collect())
}

/// Renders a value for tables; `floor` truncates to an integer for display only.
pub fn display_value(v: f64, floor: bool) -> String {
    if floor {
        format!("{}", v.floor())
    } else {
        format!("{v:.6}")
    }
}
