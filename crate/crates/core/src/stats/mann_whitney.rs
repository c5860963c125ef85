use super::ranks::{check_finite, doubled, midranks, tie_term};
use super::{normal_p, Alternative, Method, TestResult};
use crate::error::{Error, Result};

/// Largest `n_a * n_b` for which the U distribution is enumerated exactly.
pub const MWU_EXACT_MAX_PRODUCT: usize = 400;

/// Ways of drawing `pick` of the doubled ranks, indexed by their sum.
fn rank_sum_distribution(doubled_ranks: &[u64], pick: usize) -> Vec<f64> {
    let max_rank = doubled_ranks.iter().copied().max().unwrap_or(0) as usize;
    let width = pick * max_rank + 1;
    // dp[j][s]: subsets of size j with doubled sum s
    let mut dp = vec![vec![0.0f64; width]; pick + 1];
    dp[0][0] = 1.0;
    for (seen, &r) in doubled_ranks.iter().enumerate() {
        let r = r as usize;
        for j in (1..=pick.min(seen + 1)).rev() {
            let (lower, upper) = dp.split_at_mut(j);
            let from = &lower[j - 1];
            let to = &mut upper[0];
            for s in (0..width - r).rev() {
                if from[s] != 0.0 {
                    to[s + r] += from[s];
                }
            }
        }
    }
    dp.swap_remove(pick)
}

/// Mann-Whitney U test.
///
/// `U` counts pairs with `a < b`, ties counting one half, so complete
/// separation with every `a` below every `b` gives `U = n_a * n_b`. The
/// p-value is two-sided; it is exact (conditional on the midranks) when
/// `n_a * n_b <= 400`, otherwise normal with tie and continuity
/// corrections.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<TestResult> {
    mann_whitney_u_by(a, b, None)
}

/// [`mann_whitney_u`] with the p-value method forced (`Exact` or
/// `NormalApproximation`); `None` picks by sample sizes.
pub fn mann_whitney_u_by(a: &[f64], b: &[f64], method: Option<Method>) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("Mann-Whitney U needs two non-empty samples".into()));
    }
    check_finite(a, "first sample")?;
    check_finite(b, "second sample")?;
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let rank_sum_a: f64 = ranks[..na].iter().sum();
    let naf = na as f64;
    let nbf = nb as f64;
    let n = naf + nbf;
    // pairs with a > b, ties one half
    let u_greater = rank_sum_a - naf * (naf + 1.0) / 2.0;
    let u = naf * nbf - u_greater;

    let mean = naf * nbf / 2.0;
    let var = naf * nbf / 12.0 * ((n + 1.0) - tie_term(&pooled) / (n * (n - 1.0)));
    let z = (var > 0.0).then(|| (u - mean) / var.sqrt());

    let exact = match method {
        None => na * nb <= MWU_EXACT_MAX_PRODUCT,
        Some(Method::Exact) => true,
        Some(Method::NormalApproximation) => false,
        Some(other) => return Err(Error::InvalidInput(format!("Mann-Whitney U cannot use method {other}"))),
    };
    let mut result = if exact {
        if var <= 0.0 {
            TestResult::new(u, 1.0, Method::Exact)
        } else {
            let twice = doubled(&ranks);
            // Enumerate the smaller group's rank sum.
            let (pick, obs) = if na <= nb {
                (na, twice[..na].iter().sum::<u64>())
            } else {
                (nb, twice[na..].iter().sum::<u64>())
            };
            let dist = rank_sum_distribution(&twice, pick);
            let total: f64 = dist.iter().sum();
            let centre = (pick as u64 * (pooled.len() as u64 + 1)) as i64;
            let dev = (obs as i64 - centre).abs();
            let extreme: f64 = dist
                .iter()
                .enumerate()
                .filter(|(s, _)| (*s as i64 - centre).abs() >= dev)
                .map(|(_, c)| c)
                .sum();
            TestResult::new(u, extreme / total, Method::Exact)
        }
    } else {
        let p = if var > 0.0 {
            let corrected = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
            normal_p(corrected, Alternative::TwoSided)
        } else {
            1.0
        };
        TestResult::new(u, p, Method::NormalApproximation)
    };
    result.standardized = z;
    Ok(result)
}
