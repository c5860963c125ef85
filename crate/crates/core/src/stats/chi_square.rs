use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{Method, TestResult};
use crate::error::{Error, Result};
use crate::model::ContingencyTable;

const TOTAL_TOLERANCE: f64 = 1e-6;

/// Checks the usual validity rule for Pearson's chi-squared: at least 80%
/// of the expected frequencies above 5 and none below 1. Returns one note
/// per failed condition.
pub fn chi_square_validity(expected: &[f64]) -> Vec<String> {
    let mut notes = Vec::new();
    if expected.is_empty() {
        return notes;
    }
    let above_five = expected.iter().filter(|&&e| e > 5.0).count();
    let share = above_five as f64 / expected.len() as f64;
    if share < 0.8 {
        notes.push(format!(
            "only {above_five} of {} expected frequencies exceed 5 (need 80%)",
            expected.len()
        ));
    }
    let below_one = expected.iter().filter(|&&e| e < 1.0).count();
    if below_one > 0 {
        notes.push(format!("{below_one} expected frequencies are below 1"));
    }
    notes
}

fn chi_square_result(statistic: f64, df: usize, expected: &[f64]) -> TestResult {
    let p = ChiSquared::new(df as f64).expect("df >= 1").sf(statistic);
    let mut r = TestResult::new(statistic, p, Method::ChiSquared);
    r.degrees_of_freedom = Some(df as u32);
    r.notes = chi_square_validity(expected);
    r.advisory = !r.notes.is_empty();
    r
}

/// Pearson goodness-of-fit of observed class counts against expected
/// counts, `df = classes - 1`. Validity violations are reported in the
/// notes and mark the result advisory; the statistic is still computed.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> Result<TestResult> {
    if observed.len() != expected.len() {
        return Err(Error::InvalidInput(format!(
            "{} observed classes but {} expected",
            observed.len(),
            expected.len()
        )));
    }
    if observed.len() < 2 {
        return Err(Error::InvalidInput("goodness of fit needs at least two classes".into()));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::InvalidInput("no observations".into()));
    }
    if let Some(e) = expected.iter().find(|e| !e.is_finite() || **e <= 0.0) {
        return Err(Error::InvalidInput(format!("expected count {e} is not positive")));
    }
    let expected_total: f64 = expected.iter().sum();
    if (expected_total - total as f64).abs() > TOTAL_TOLERANCE {
        return Err(Error::InvalidInput(format!(
            "expected counts sum to {expected_total}, observed to {total}"
        )));
    }
    let statistic = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    Ok(chi_square_result(statistic, observed.len() - 1, expected))
}

fn independence_parts(table: &ContingencyTable) -> Result<(f64, Vec<f64>)> {
    if table.n_rows() < 2 || table.n_cols() < 2 {
        return Err(Error::InvalidInput("need at least a 2x2 table".into()));
    }
    let rows = table.row_totals();
    let cols = table.column_totals();
    let n = table.total() as f64;
    if rows.contains(&0) || cols.contains(&0) {
        return Err(Error::Degenerate("contingency table has an empty row or column".into()));
    }
    let mut statistic = 0.0;
    let mut expected = Vec::with_capacity(table.n_rows() * table.n_cols());
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            let e = rows[i] as f64 * cols[j] as f64 / n;
            statistic += (o as f64 - e).powi(2) / e;
            expected.push(e);
        }
    }
    Ok((statistic, expected))
}

/// Pearson chi-squared test of independence on a contingency table.
pub fn chi_square_independence(table: &ContingencyTable) -> Result<TestResult> {
    let (statistic, expected) = independence_parts(table)?;
    let df = (table.n_rows() - 1) * (table.n_cols() - 1);
    Ok(chi_square_result(statistic, df, &expected))
}

/// Cramér's V: `sqrt(chi2 / (N (min(rows, cols) - 1)))`, in [0, 1].
pub fn cramers_v(table: &ContingencyTable) -> Result<f64> {
    let (statistic, _) = independence_parts(table)?;
    let n = table.total() as f64;
    let m = table.n_rows().min(table.n_cols()) as f64 - 1.0;
    Ok((statistic / (n * m)).sqrt().clamp(0.0, 1.0))
}
