use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::ranks::{check_finite, midranks, tie_term};
use super::{Method, TestResult};
use crate::error::{Error, Result};

/// Tie-corrected Kruskal-Wallis H with `g - 1` degrees of freedom.
///
/// When every observation is identical the tie correction vanishes and
/// the result is `H = 0`, `p = 1`.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<TestResult> {
    if groups.len() < 2 {
        return Err(Error::InvalidInput("Kruskal-Wallis needs at least two groups".into()));
    }
    if groups.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput("Kruskal-Wallis groups must be non-empty".into()));
    }
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    check_finite(&pooled, "Kruskal-Wallis sample")?;
    let n = pooled.len() as f64;
    if pooled.len() < 3 {
        return Err(Error::InvalidInput(
            "Kruskal-Wallis needs at least three observations".into(),
        ));
    }
    let df = groups.len() - 1;
    let correction = 1.0 - tie_term(&pooled) / (n * n * n - n);
    if correction <= 0.0 {
        let mut r = TestResult::new(0.0, 1.0, Method::ChiSquared);
        r.degrees_of_freedom = Some(df as u32);
        r.notes.push("all observations are identical".into());
        return Ok(r);
    }

    let ranks = midranks(&pooled);
    let mut offset = 0;
    let mut sum_sq = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum_sq += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = (12.0 / (n * (n + 1.0)) * sum_sq - 3.0 * (n + 1.0)) / correction;
    let h = h.max(0.0);
    let p = ChiSquared::new(df as f64).expect("df >= 1").sf(h);
    let mut r = TestResult::new(h, p, Method::ChiSquared);
    r.degrees_of_freedom = Some(df as u32);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_pairs() {
        let r = kruskal_wallis(&[vec![1., 2.], vec![3., 4.], vec![5., 6.]]).unwrap();
        // 12/(6*7) * (9 + 49 + 121)/2 - 21
        let hand = 12.0 / 42.0 * (9.0 + 49.0 + 121.0) / 2.0 - 21.0;
        assert!((r.statistic - hand).abs() < 1e-12);
        assert!((r.statistic - 4.571).abs() < 1e-3);
        assert_eq!(r.degrees_of_freedom, Some(2));
    }

    #[test]
    fn identical_groups() {
        let g = vec![1., 2., 3.];
        let r = kruskal_wallis(&[g.clone(), g.clone(), g]).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-9);
        let tied = kruskal_wallis(&[vec![4., 4.], vec![4.]]).unwrap();
        assert_eq!((tied.statistic, tied.p_value), (0.0, 1.0));
    }

    #[test]
    fn invalid_inputs() {
        assert!(kruskal_wallis(&[vec![1., 2.]]).is_err());
        assert!(kruskal_wallis(&[vec![1.], vec![]]).is_err());
        assert!(kruskal_wallis(&[vec![1.], vec![2.]]).is_err());
    }
}
