//! Browser bindings for three operations: scoring one paper against a
//! reference set, evaluating a subset-by-class counts table, and the
//! signed-rank test. Each binding wraps a plain function that returns a
//! JSON or text payload, so the logic is testable without a browser.

use percentile_impact::io::read_counts;
use percentile_impact::render::{render_report, Format};
use percentile_impact::stats::{wilcoxon_signed_rank, Alternative};
use percentile_impact::{
    builtin_nsf6, classify, compute_percentile, evaluate, Dataset, EvaluationOptions, ReferenceDistribution,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
struct ScoreView {
    citations: u64,
    reference_size: usize,
    strictly_fewer: usize,
    raw_percentage: f64,
    percentile_class: u8,
    rank: u8,
    scheme_class: String,
    weight: f64,
    in_reference: bool,
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, String> {
    text.split(|c: char| c.is_whitespace() || c == ',' || c == ';')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect()
}

fn parse_counts(text: &str) -> Result<Vec<u64>, String> {
    parse_numbers(text)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as u64)
            } else {
                Err(format!("citation counts must be non-negative integers, got {x}"))
            }
        })
        .collect()
}

/// Scores `citations` against the counts in `reference` (separated by
/// whitespace, commas or semicolons). Returns JSON.
pub fn score_paper(citations: u64, reference: &str) -> Result<String, String> {
    let counts = parse_counts(reference)?;
    let dist = ReferenceDistribution::new("reference", counts).map_err(|e| e.to_string())?;
    let score = compute_percentile(citations, &dist).map_err(|e| e.to_string())?;
    let scheme = builtin_nsf6();
    let class = classify("paper", &score, &scheme);
    let view = ScoreView {
        citations,
        reference_size: dist.len(),
        strictly_fewer: dist.counts.iter().filter(|&&c| c < citations).count(),
        raw_percentage: score.raw_percentage,
        percentile_class: score.percentile_class,
        rank: score.rank,
        scheme_class: scheme.labels()[class.class_index].clone(),
        weight: class.weight,
        in_reference: dist.contains(citations),
    };
    serde_json::to_string_pretty(&view).map_err(|e| e.to_string())
}

/// Evaluates a counts table (`subset_id,<50,...` with one column per
/// six-class bin) and renders the report as `text`, `csv` or `json`.
pub fn evaluate_counts_table(csv: &str, format: &str) -> Result<String, String> {
    let scheme = builtin_nsf6();
    let format: Format = format.parse().map_err(|e: percentile_impact::Error| e.to_string())?;
    let table = read_counts(csv.as_bytes(), &scheme).map_err(|e| e.to_string())?;
    let report = evaluate(&Dataset::Counts(table), &EvaluationOptions::new(scheme)).map_err(|e| e.to_string())?;
    Ok(render_report(&report, format))
}

/// Signed-rank test of `values` against `mu0`; `alternative` is
/// `two-sided`, `greater` or `less`. Returns JSON.
pub fn signed_rank(values: &str, mu0: f64, alternative: &str) -> Result<String, String> {
    let values = parse_numbers(values)?;
    let alternative = match alternative {
        "two-sided" | "" => Alternative::TwoSided,
        "greater" => Alternative::Greater,
        "less" => Alternative::Less,
        other => return Err(format!("unknown alternative {other:?}")),
    };
    let result = wilcoxon_signed_rank(&values, mu0, alternative).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&result).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = scorePaper)]
pub fn score_paper_js(citations: u32, reference: &str) -> Result<String, JsError> {
    score_paper(citations.into(), reference).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = evaluateCounts)]
pub fn evaluate_counts_js(csv: &str, format: &str) -> Result<String, JsError> {
    evaluate_counts_table(csv, format).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = signedRankTest)]
pub fn signed_rank_js(values: &str, mu0: f64, alternative: &str) -> Result<String, JsError> {
    signed_rank(values, mu0, alternative).map_err(|e| JsError::new(&e))
}
