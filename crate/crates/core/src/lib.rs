//! Percentile-rank citation impact indicators.
//!
//! Papers are placed in percentile classes against reference sets of
//! comparable papers, binned by an evaluation scheme (the six-class
//! scheme with weights 1..=6 is built in), and scored per subset with
//! `R(i)` (subset-relative) and `R(i,k)` (set-relative) indicators. The
//! [`stats`] module carries the non-parametric tests used to judge the
//! differences; [`report`] runs the whole pipeline.

pub mod error;
pub mod indicators;
pub mod io;
pub mod model;
pub mod percentile;
pub mod render;
pub mod report;
pub mod scheme;
pub mod stats;

pub use error::{Error, Result};
pub use indicators::{
    baseline_r, mean_of_rates, mean_percentile, r_across, r_within, rank_subsets, rate_of_averages, standard_error,
    CitationPair, NormalizationContext, SubsetClassCounts,
};
pub use model::{
    validate_dataset, ContingencyTable, IndicatorResult, PaperRecord, PercentileScore, ReferenceDistribution, Violation,
};
pub use percentile::{assign_percentiles, compute_percentile, percentile_vector, PercentileVector};
pub use render::{render_report, Format};
pub use report::{evaluate, run_evaluation, Dataset, EvaluationConfig, EvaluationOptions, Report, TestKind};
pub use scheme::{builtin_nsf6, classify, contingency_table, expected_counts, load_scheme, ClassScheme};
