//! Non-parametric significance tests.
//!
//! Ties are midranked throughout. Six-class data is heavily tied, so every
//! statistic here applies the usual tie corrections and the exact paths
//! enumerate the conditional distribution of the observed midranks.

mod chi_square;
mod dunn;
mod interval;
mod kruskal;
mod mann_whitney;
pub mod ranks;
mod signed_rank;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

pub use chi_square::{chi_square_gof, chi_square_independence, chi_square_validity, cramers_v};
pub use dunn::{dunn_posthoc, pairwise_mann_whitney, PairwiseComparison};
pub use interval::{bonferroni_alpha, format_alpha, goldstein_ci, Interval, GOLDSTEIN_FACTOR};
pub use kruskal::kruskal_wallis;
pub use mann_whitney::{mann_whitney_u, mann_whitney_u_by, MWU_EXACT_MAX_PRODUCT};
pub use signed_rank::{wilcoxon_signed_rank, wilcoxon_signed_rank_by, SIGNED_RANK_EXACT_MAX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    NormalApproximation,
    ChiSquared,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::NormalApproximation => "normal",
            Method::ChiSquared => "chi-squared",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    #[default]
    TwoSided,
    Greater,
    Less,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub degrees_of_freedom: Option<u32>,
    pub method: Method,
    /// Normal-approximation z of the statistic, where one exists.
    pub standardized: Option<f64>,
    /// Set when a validity rule for the test failed; the result is then
    /// advisory only.
    pub advisory: bool,
    pub notes: Vec<String>,
}

impl TestResult {
    pub(crate) fn new(statistic: f64, p_value: f64, method: Method) -> Self {
        Self {
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            degrees_of_freedom: None,
            method,
            standardized: None,
            advisory: false,
            notes: Vec::new(),
        }
    }

    pub fn significant(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// A named sample of observations, one per subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub label: String,
    pub values: Vec<f64>,
}

impl LabeledSample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            values,
        }
    }
}

pub(crate) fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

pub(crate) fn normal_p(z: f64, alternative: Alternative) -> f64 {
    let n = std_normal();
    match alternative {
        Alternative::TwoSided => 2.0 * n.sf(z.abs()),
        Alternative::Greater => n.sf(z),
        Alternative::Less => n.cdf(z),
    }
}

/// Upper standard-normal quantile for tail probability `p`.
pub(crate) fn normal_upper_quantile(p: f64) -> f64 {
    std_normal().inverse_cdf(1.0 - p)
}
