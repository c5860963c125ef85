//! Fixture access and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use percentile_impact::io::read_counts;
use percentile_impact::report::{EvaluationConfig, InputSource};
use percentile_impact::{builtin_nsf6, ContingencyTable, EvaluationOptions};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub const COUNT_ROWS: [[u64; 6]; 7] = [
    [7, 6, 3, 1, 3, 3],
    [10, 5, 13, 5, 4, 0],
    [5, 4, 6, 5, 2, 0],
    [10, 8, 8, 5, 1, 0],
    [11, 18, 6, 1, 1, 0],
    [35, 14, 10, 1, 5, 0],
    [17, 9, 4, 2, 0, 0],
];

pub fn seven_subsets() -> ContingencyTable {
    let text = std::fs::read_to_string(fixture("seven_subsets_counts.csv")).unwrap();
    read_counts(text.as_bytes(), &builtin_nsf6()).unwrap()
}

pub fn synthetic_config() -> EvaluationConfig {
    EvaluationConfig {
        input: InputSource::Papers {
            papers_path: fixture("synthetic/papers.csv"),
            references_path: Some(fixture("synthetic/refs.csv")),
        },
        options: EvaluationOptions::new(builtin_nsf6()),
    }
}

/// Rank of each value among distinct values (1-based); inputs must be
/// tie-free.
fn plain_ranks(values: &[f64]) -> Vec<usize> {
    values
        .iter()
        .map(|v| values.iter().filter(|w| w <= &v).count())
        .collect()
}

/// Exact signed-rank p-values (two-sided, greater, less) by listing all
/// 2^n sign assignments over the observed magnitudes.
pub fn brute_signed_rank(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len();
    let mags: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let ranks = plain_ranks(&mags);
    let w = |mask: u32| -> usize { (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| ranks[i]).sum() };
    let observed_mask = (0..n).filter(|&i| values[i] > 0.0).fold(0u32, |m, i| m | 1 << i);
    let obs = w(observed_mask) as f64;
    let centre = (n * (n + 1)) as f64 / 4.0;
    let total = (1u32 << n) as f64;
    let (mut two, mut ge, mut le) = (0.0, 0.0, 0.0);
    for mask in 0..1u32 << n {
        let s = w(mask) as f64;
        if (s - centre).abs() >= (obs - centre).abs() - 1e-9 {
            two += 1.0;
        }
        if s >= obs {
            ge += 1.0;
        }
        if s <= obs {
            le += 1.0;
        }
    }
    (two / total, ge / total, le / total)
}

/// Exact two-sided Mann-Whitney p-value by listing every way of splitting
/// the pooled values into groups of the observed sizes.
pub fn brute_mann_whitney(a: &[f64], b: &[f64]) -> (f64, f64) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let u_of = |mask: u32| -> f64 {
        let mut u = 0.0;
        for i in (0..n).filter(|&i| mask >> i & 1 == 1) {
            for j in (0..n).filter(|&j| mask >> j & 1 == 0) {
                if pooled[i] < pooled[j] {
                    u += 1.0;
                }
            }
        }
        u
    };
    let observed_mask = (1u32 << a.len()) - 1;
    let obs = u_of(observed_mask);
    let centre = (a.len() * b.len()) as f64 / 2.0;
    let (mut hits, mut total) = (0.0, 0.0);
    for mask in 0..1u32 << n {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        total += 1.0;
        if (u_of(mask) - centre).abs() >= (obs - centre).abs() - 1e-9 {
            hits += 1.0;
        }
    }
    (obs, hits / total)
}
