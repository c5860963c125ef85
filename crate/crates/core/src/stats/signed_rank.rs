use super::ranks::{check_finite, doubled, midranks, tie_term};
use super::{normal_p, Alternative, Method, TestResult};
use crate::error::{Error, Result};

/// Largest number of non-zero differences for which the signed-rank
/// distribution is enumerated exactly.
pub const SIGNED_RANK_EXACT_MAX: usize = 20;

/// Number of sign assignments reaching each doubled positive-rank sum.
fn signed_rank_distribution(doubled_ranks: &[u64]) -> Vec<f64> {
    let max: u64 = doubled_ranks.iter().sum();
    let mut dist = vec![0.0; max as usize + 1];
    dist[0] = 1.0;
    let mut reach = 0usize;
    for &r in doubled_ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if dist[s] != 0.0 {
                dist[s + r] += dist[s];
            }
        }
        reach += r;
    }
    dist
}

/// Wilcoxon signed-rank test of `values` against the location `mu0`.
///
/// Zero differences are dropped and ties in |difference| are midranked.
/// The statistic is W+, the sum of ranks of positive differences. The
/// p-value is exact for up to [`SIGNED_RANK_EXACT_MAX`] differences and
/// normal (tie- and continuity-corrected) otherwise.
pub fn wilcoxon_signed_rank(values: &[f64], mu0: f64, alternative: Alternative) -> Result<TestResult> {
    wilcoxon_signed_rank_by(values, mu0, alternative, None)
}

/// [`wilcoxon_signed_rank`] with the p-value method forced (`Exact` or
/// `NormalApproximation`); `None` picks by sample size.
pub fn wilcoxon_signed_rank_by(
    values: &[f64],
    mu0: f64,
    alternative: Alternative,
    method: Option<Method>,
) -> Result<TestResult> {
    check_finite(values, "signed-rank sample")?;
    let diffs: Vec<f64> = values.iter().map(|v| v - mu0).filter(|d| *d != 0.0).collect();
    if diffs.is_empty() {
        return Err(Error::Degenerate(
            "all differences from the hypothesised median are zero".into(),
        ));
    }
    let m = diffs.len();
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&abs);
    let w_plus: f64 = ranks
        .iter()
        .zip(&diffs)
        .filter(|(_, d)| **d > 0.0)
        .map(|(r, _)| r)
        .sum();

    let mf = m as f64;
    let mean = mf * (mf + 1.0) / 4.0;
    let var = mf * (mf + 1.0) * (2.0 * mf + 1.0) / 24.0 - tie_term(&abs) / 48.0;
    let z = (var > 0.0).then(|| (w_plus - mean) / var.sqrt());

    let exact = match method {
        None => m <= SIGNED_RANK_EXACT_MAX,
        Some(Method::Exact) => true,
        Some(Method::NormalApproximation) => false,
        Some(other) => {
            return Err(Error::InvalidInput(format!(
                "signed-rank test cannot use method {other}"
            )))
        }
    };
    let mut result = if exact {
        let twice = doubled(&ranks);
        let dist = signed_rank_distribution(&twice);
        let total: f64 = dist.iter().sum();
        let obs = (2.0 * w_plus).round() as i64;
        let centre: i64 = twice.iter().sum::<u64>() as i64; // 2 * (2 * mean)
        let tail = |keep: &dyn Fn(i64) -> bool| -> f64 {
            dist.iter()
                .enumerate()
                .filter(|(s, _)| keep(*s as i64))
                .map(|(_, c)| c)
                .sum::<f64>()
                / total
        };
        let p = match alternative {
            Alternative::TwoSided => {
                let dev = (2 * obs - centre).abs();
                tail(&|s| (2 * s - centre).abs() >= dev)
            }
            Alternative::Greater => tail(&|s| s >= obs),
            Alternative::Less => tail(&|s| s <= obs),
        };
        TestResult::new(w_plus, p, Method::Exact)
    } else {
        // continuity-corrected, like the Mann-Whitney normal path
        let p = if var > 0.0 {
            let shift = match alternative {
                Alternative::TwoSided => -(0.5f64).min((w_plus - mean).abs()) * (w_plus - mean).signum(),
                Alternative::Greater => -0.5,
                Alternative::Less => 0.5,
            };
            normal_p((w_plus - mean + shift) / var.sqrt(), alternative)
        } else {
            1.0
        };
        TestResult::new(w_plus, p, Method::NormalApproximation)
    };
    result.standardized = z;
    if values.len() != m {
        result
            .notes
            .push(format!("{} zero difference(s) dropped", values.len() - m));
    }
    Ok(result)
}
