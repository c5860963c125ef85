//! Percentile-rank indicators and the averages-based indicators they
//! replace.
//!
//! `r_within` weights each class by its share of the subset; `r_across`
//! weights by the share of all memberships and multiplies by the number of
//! subsets, so a subset's size counts towards its score. The two are tied
//! by `r_across = (k * n / N) * r_within`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ContingencyTable, IndicatorResult};
use crate::percentile::PercentileVector;
use crate::scheme::ClassScheme;

/// Per-class counts of one subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetClassCounts {
    pub subset_id: String,
    pub counts: Vec<u64>,
}

impl SubsetClassCounts {
    pub fn new(subset_id: impl Into<String>, counts: Vec<u64>) -> Self {
        Self {
            subset_id: subset_id.into(),
            counts,
        }
    }

    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// One row per subset of a contingency table.
    pub fn from_table(table: &ContingencyTable) -> Vec<Self> {
        table
            .subset_ids
            .iter()
            .zip(&table.counts)
            .map(|(id, row)| Self::new(id.clone(), row.clone()))
            .collect()
    }
}

/// Number of subsets `k` and total memberships `N` of the whole set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationContext {
    pub k: usize,
    pub total: u64,
}

impl NormalizationContext {
    pub fn new(k: usize, total: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InconsistentContext("k must be at least 1".into()));
        }
        if total < k as u64 {
            return Err(Error::InconsistentContext(format!(
                "N = {total} is smaller than k = {k}"
            )));
        }
        Ok(Self { k, total })
    }

    pub fn from_counts(subsets: &[SubsetClassCounts]) -> Result<Self> {
        Self::new(subsets.len(), subsets.iter().map(SubsetClassCounts::n).sum())
    }

    /// Factor `k * n / N` mapping subset-relative values onto the set.
    pub fn scale(&self, n: u64) -> f64 {
        self.k as f64 * n as f64 / self.total as f64
    }
}

fn check_counts(counts: &SubsetClassCounts, scheme: &ClassScheme) -> Result<u64> {
    if counts.counts.len() != scheme.len() {
        return Err(Error::InvalidInput(format!(
            "subset `{}` has {} class counts, scheme `{}` has {} classes",
            counts.subset_id,
            counts.counts.len(),
            scheme.name(),
            scheme.len()
        )));
    }
    let n = counts.n();
    if n == 0 {
        return Err(Error::EmptySubset(counts.subset_id.clone()));
    }
    Ok(n)
}

fn weighted_sum(counts: &SubsetClassCounts, scheme: &ClassScheme) -> f64 {
    counts
        .counts
        .iter()
        .zip(scheme.classes())
        .map(|(&n, c)| c.weight * n as f64)
        .sum()
}

/// Relative class frequencies within the subset, `n_r / n`.
pub fn within_proportions(counts: &SubsetClassCounts) -> Vec<f64> {
    let n = counts.n() as f64;
    counts.counts.iter().map(|&c| c as f64 / n).collect()
}

/// Relative class frequencies over the whole set, `n_r / N`.
pub fn across_proportions(counts: &SubsetClassCounts, ctx: &NormalizationContext) -> Vec<f64> {
    let total = ctx.total as f64;
    counts.counts.iter().map(|&c| c as f64 / total).collect()
}

/// Mean class weight of the subset's papers.
pub fn r_within(counts: &SubsetClassCounts, scheme: &ClassScheme) -> Result<IndicatorResult> {
    let n = check_counts(counts, scheme)?;
    Ok(IndicatorResult {
        subset_id: counts.subset_id.clone(),
        value: weighted_sum(counts, scheme) / n as f64,
        standard_error: standard_error(counts, scheme).ok(),
        rank: None,
    })
}

/// Weighted class frequencies relative to all `N` memberships, times `k`.
pub fn r_across(
    counts: &SubsetClassCounts,
    ctx: &NormalizationContext,
    scheme: &ClassScheme,
) -> Result<IndicatorResult> {
    let n = check_counts(counts, scheme)?;
    if ctx.total < n {
        return Err(Error::InconsistentContext(format!(
            "N = {} is smaller than the size {n} of subset `{}`",
            ctx.total, counts.subset_id
        )));
    }
    let scale = ctx.scale(n);
    Ok(IndicatorResult {
        subset_id: counts.subset_id.clone(),
        value: ctx.k as f64 * weighted_sum(counts, scheme) / ctx.total as f64,
        standard_error: standard_error(counts, scheme).ok().map(|se| se * scale),
        rank: None,
    })
}

/// Standard error of the mean class weight: sample standard deviation of
/// the per-paper weights (n - 1 denominator) over sqrt(n).
pub fn standard_error(counts: &SubsetClassCounts, scheme: &ClassScheme) -> Result<f64> {
    let n = check_counts(counts, scheme)?;
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "standard error of subset `{}` needs at least two papers",
            counts.subset_id
        )));
    }
    let mean = weighted_sum(counts, scheme) / n as f64;
    let ss: f64 = counts
        .counts
        .iter()
        .zip(scheme.classes())
        .map(|(&k, c)| k as f64 * (c.weight - mean).powi(2))
        .sum();
    Ok((ss / (n - 1) as f64).sqrt() / (n as f64).sqrt())
}

/// Expected indicator value when papers fall into classes with the
/// scheme's expected proportions.
pub fn baseline_r(scheme: &ClassScheme) -> f64 {
    scheme.classes().iter().map(|c| c.expected_proportion * c.weight).sum()
}

/// One line of the step-by-step derivation of both indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationRow {
    pub label: String,
    pub weight: f64,
    pub count: u64,
    pub p_within: f64,
    pub weighted_within: f64,
    pub p_across: f64,
    /// `w_r * p_{r,k} * k`
    pub weighted_across: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub subset_id: String,
    pub n: u64,
    pub rows: Vec<DerivationRow>,
    pub r_within: f64,
    pub r_across: f64,
}

/// Class-by-class derivation of `r_within` and `r_across`.
pub fn derivation(counts: &SubsetClassCounts, ctx: &NormalizationContext, scheme: &ClassScheme) -> Result<Derivation> {
    let within = r_within(counts, scheme)?;
    let across = r_across(counts, ctx, scheme)?;
    let p_within = within_proportions(counts);
    let p_across = across_proportions(counts, ctx);
    let rows = scheme
        .labels()
        .into_iter()
        .zip(scheme.classes())
        .enumerate()
        .map(|(i, (label, class))| DerivationRow {
            label,
            weight: class.weight,
            count: counts.counts[i],
            p_within: p_within[i],
            weighted_within: class.weight * p_within[i],
            p_across: p_across[i],
            weighted_across: class.weight * p_across[i] * ctx.k as f64,
        })
        .collect();
    Ok(Derivation {
        subset_id: counts.subset_id.clone(),
        n: counts.n(),
        rows,
        r_within: within.value,
        r_across: across.value,
    })
}

/// A mean with its standard error (absent for a single observation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub standard_error: Option<f64>,
}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone) -> Option<MeanEstimate> {
    let n = values.clone().count();
    if n == 0 {
        return None;
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    let standard_error = (n >= 2).then(|| {
        let ss: f64 = values.map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
    });
    Some(MeanEstimate { mean, standard_error })
}

/// Mean percentile rank (1..=100) of a subset.
pub fn mean_percentile(vector: &PercentileVector) -> Result<MeanEstimate> {
    let ranks = vector
        .classes()
        .into_iter()
        .map(|c| f64::from(c) + 1.0)
        .collect::<Vec<_>>();
    mean_and_se(ranks.iter().copied()).ok_or_else(|| Error::EmptySubset(vector.subset_id.clone()))
}

/// Observed citations of a paper and the citations expected from its
/// reference set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationPair {
    pub paper_id: String,
    pub observed: f64,
    pub expected: f64,
}

impl CitationPair {
    pub fn new(paper_id: impl Into<String>, observed: f64, expected: f64) -> Self {
        Self {
            paper_id: paper_id.into(),
            observed,
            expected,
        }
    }
}

/// Total observed over total expected citations.
pub fn rate_of_averages(pairs: &[CitationPair]) -> Result<f64> {
    let observed: f64 = pairs.iter().map(|p| p.observed).sum();
    let expected: f64 = pairs.iter().map(|p| p.expected).sum();
    if expected <= 0.0 {
        return Err(Error::Degenerate("total expected citations is zero".into()));
    }
    Ok(observed / expected)
}

/// Mean of per-paper observed/expected ratios.
pub fn mean_of_rates(pairs: &[CitationPair]) -> Result<MeanEstimate> {
    if let Some(p) = pairs.iter().find(|p| p.expected <= 0.0) {
        return Err(Error::ZeroExpectation(p.paper_id.clone()));
    }
    mean_and_se(pairs.iter().map(|p| p.observed / p.expected))
        .ok_or_else(|| Error::Degenerate("no citation pairs".into()))
}

fn by_value_desc(a: &IndicatorResult, b: &IndicatorResult) -> Ordering {
    b.value.total_cmp(&a.value).then_with(|| a.subset_id.cmp(&b.subset_id))
}

/// Sorts results by descending value and assigns competition ranks: tied
/// values share the smaller rank and the next rank skips accordingly.
pub fn rank_subsets(results: &[IndicatorResult]) -> Vec<IndicatorResult> {
    let mut ranked = results.to_vec();
    ranked.sort_by(by_value_desc);
    let mut current = 0;
    for i in 0..ranked.len() {
        if i == 0 || ranked[i].value != ranked[i - 1].value {
            current = i + 1;
        }
        ranked[i].rank = Some(current);
    }
    ranked
}

/// Fills in ranks while keeping the input order.
pub fn assign_ranks(results: &mut [IndicatorResult]) {
    let ranked = rank_subsets(results);
    for r in results.iter_mut() {
        r.rank = ranked.iter().find(|x| x.subset_id == r.subset_id).and_then(|x| x.rank);
    }
}
