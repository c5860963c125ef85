use serde::{Deserialize, Serialize};

use super::interval::bonferroni_alpha;
use super::ranks::{check_finite, midranks, tie_term};
use super::{mann_whitney_u, normal_p, normal_upper_quantile, Alternative, Interval, LabeledSample};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub subset_a: String,
    pub subset_b: String,
    pub z_statistic: f64,
    pub p_value: f64,
    /// Per-comparison alpha after the Bonferroni split of the family alpha.
    pub adjusted_alpha: f64,
    pub significant: bool,
    /// Interval on the difference `a - b` (mean ranks for Dunn), present
    /// only for significant comparisons.
    pub confidence_interval: Option<Interval>,
}

/// Group indices ordered by label, then every pair in that order.
fn ordered_pairs(groups: &[LabeledSample]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| groups[a].label.cmp(&groups[b].label));
    let mut pairs = Vec::new();
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            pairs.push((a, b));
        }
    }
    pairs
}

fn check_groups(groups: &[LabeledSample]) -> Result<()> {
    if groups.len() < 2 {
        return Err(Error::InvalidInput(
            "pairwise comparison needs at least two groups".into(),
        ));
    }
    for g in groups {
        if g.values.is_empty() {
            return Err(Error::EmptySubset(g.label.clone()));
        }
        check_finite(&g.values, &g.label)?;
    }
    Ok(())
}

/// Dunn's post-hoc comparisons of mean ranks with a Bonferroni-adjusted
/// per-comparison alpha.
///
/// Ranks are taken over all groups pooled. The pooled variance is the
/// tie-corrected `N (N + 1) / 12`. A pair is significant when its
/// two-sided p-value falls below `family_alpha / c`, `c = g (g - 1) / 2`;
/// significant pairs carry an interval on the mean-rank difference at
/// confidence `1 - family_alpha / c`.
pub fn dunn_posthoc(groups: &[LabeledSample], family_alpha: f64) -> Result<Vec<PairwiseComparison>> {
    check_groups(groups)?;
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.values.iter().copied()).collect();
    let n = pooled.len() as f64;
    let ranks = midranks(&pooled);
    let mut mean_ranks = Vec::with_capacity(groups.len());
    let mut offset = 0;
    for g in groups {
        let len = g.values.len();
        mean_ranks.push(ranks[offset..offset + len].iter().sum::<f64>() / len as f64);
        offset += len;
    }
    let variance = n * (n + 1.0) / 12.0 * (1.0 - tie_term(&pooled) / (n * n * n - n));
    let adjusted = bonferroni_alpha(groups.len(), family_alpha);
    let critical = normal_upper_quantile(adjusted / 2.0);

    Ok(ordered_pairs(groups)
        .into_iter()
        .map(|(a, b)| {
            let diff = mean_ranks[a] - mean_ranks[b];
            let inv = 1.0 / groups[a].values.len() as f64 + 1.0 / groups[b].values.len() as f64;
            let se = (variance.max(0.0) * inv).sqrt();
            let (z, p) = if se > 0.0 {
                let z = diff / se;
                (z, normal_p(z, Alternative::TwoSided))
            } else {
                (0.0, 1.0)
            };
            let significant = p < adjusted;
            PairwiseComparison {
                subset_a: groups[a].label.clone(),
                subset_b: groups[b].label.clone(),
                z_statistic: z,
                p_value: p,
                adjusted_alpha: adjusted,
                significant,
                confidence_interval: significant.then_some(Interval {
                    lower: diff - critical * se,
                    upper: diff + critical * se,
                }),
            }
        })
        .collect())
}

/// Mann-Whitney U on every pair, judged against the same Bonferroni
/// per-comparison alpha as [`dunn_posthoc`]. Unlike Dunn, each pair is
/// ranked on its own. The reported z is oriented like Dunn's, positive
/// when `a` tends to exceed `b`.
pub fn pairwise_mann_whitney(groups: &[LabeledSample], family_alpha: f64) -> Result<Vec<PairwiseComparison>> {
    check_groups(groups)?;
    let adjusted = bonferroni_alpha(groups.len(), family_alpha);
    ordered_pairs(groups)
        .into_iter()
        .map(|(a, b)| {
            let r = mann_whitney_u(&groups[a].values, &groups[b].values)?;
            Ok(PairwiseComparison {
                subset_a: groups[a].label.clone(),
                subset_b: groups[b].label.clone(),
                z_statistic: -r.standardized.unwrap_or(0.0),
                p_value: r.p_value,
                adjusted_alpha: adjusted,
                significant: r.p_value < adjusted,
                confidence_interval: None,
            })
        })
        .collect()
}
