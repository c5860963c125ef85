//! End-to-end evaluation: percentiles, classes, indicators and the test
//! battery, in that order, collected into a [`Report`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicators::{
    assign_ranks, baseline_r, mean_of_rates, r_across, r_within, rate_of_averages, CitationPair, NormalizationContext,
    SubsetClassCounts,
};
use crate::io;
use crate::model::{
    membership_count, subset_order, validate_dataset, ContingencyTable, IndicatorResult, PaperRecord, PercentileScore,
    ReferenceDistribution,
};
use crate::percentile::{assign_percentiles, percentile_vectors, PercentileVector};
use crate::scheme::{contingency_table, expected_counts, hundred_classes, ClassScheme, SchemeConfig};
use crate::stats::{
    bonferroni_alpha, chi_square_gof, cramers_v, dunn_posthoc, goldstein_ci, kruskal_wallis, pairwise_mann_whitney,
    wilcoxon_signed_rank, Alternative, Interval, LabeledSample, PairwiseComparison, TestResult,
};

/// Location tested by the signed-rank test on percentile classes.
pub const MEDIAN_PERCENTILE: f64 = 50.0;

pub const DEFAULT_FAMILY_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Wilcoxon,
    Chi2,
    Kruskal,
    Dunn,
    Mwu,
}

impl TestKind {
    pub const ALL: [TestKind; 5] = [
        TestKind::Wilcoxon,
        TestKind::Chi2,
        TestKind::Kruskal,
        TestKind::Dunn,
        TestKind::Mwu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::Wilcoxon => "wilcoxon",
            TestKind::Chi2 => "chi2",
            TestKind::Kruskal => "kruskal",
            TestKind::Dunn => "dunn",
            TestKind::Mwu => "mwu",
        }
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TestKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown test `{s}`")))
    }
}

/// Parses a comma-separated test list such as `kruskal,dunn`.
pub fn parse_tests(list: &str) -> Result<BTreeSet<TestKind>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(TestKind::from_str)
        .collect()
}

/// The three accepted input shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    /// Papers scored against their reference distributions.
    Raw {
        papers: Vec<PaperRecord>,
        refs: Vec<ReferenceDistribution>,
    },
    /// Papers carrying already-assigned percentile classes.
    Precomputed {
        papers: Vec<PaperRecord>,
        classes: BTreeMap<String, u8>,
    },
    /// Subset-by-class counts only.
    Counts(ContingencyTable),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Papers {
        papers_path: PathBuf,
        references_path: Option<PathBuf>,
    },
    Counts {
        counts_path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationOptions {
    pub scheme: ClassScheme,
    pub family_alpha: f64,
    pub tests: BTreeSet<TestKind>,
    /// Run pairwise comparisons even when Kruskal-Wallis does not reject.
    pub force_posthoc: bool,
}

impl EvaluationOptions {
    pub fn new(scheme: ClassScheme) -> Self {
        Self {
            scheme,
            family_alpha: DEFAULT_FAMILY_ALPHA,
            tests: TestKind::ALL.into_iter().collect(),
            force_posthoc: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationConfig {
    pub input: InputSource,
    pub options: EvaluationOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub input: String,
    pub papers: Option<usize>,
    pub memberships: u64,
    pub subsets: usize,
    pub scheme: SchemeConfig,
    pub family_alpha: f64,
    pub pairwise_alpha: f64,
    pub tests: Vec<TestKind>,
    pub force_posthoc: bool,
    pub decisions: Vec<String>,
}

/// One indicator evaluated for every subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorColumn {
    pub key: String,
    pub label: String,
    pub results: Vec<IndicatorResult>,
    /// Value expected under random attribution, where defined.
    pub baseline: Option<f64>,
    /// Goldstein-adjusted interval per subset, in `results` order.
    pub intervals: Vec<Option<Interval>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ok(TestResult),
    Degenerate(String),
    Skipped(String),
}

impl Outcome {
    fn from_result(r: Result<TestResult>) -> Self {
        match r {
            Ok(t) => Outcome::Ok(t),
            Err(e) if e.is_degenerate() => Outcome::Degenerate(e.to_string()),
            Err(e) => Outcome::Skipped(e.to_string()),
        }
    }

    pub fn result(&self) -> Option<&TestResult> {
        match self {
            Outcome::Ok(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetTest {
    pub subset_id: String,
    pub outcome: Outcome,
}

/// A test over all subsets on one kind of data (`classes` or
/// `percentiles`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTest {
    pub data: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseSection {
    pub data: String,
    pub comparisons: Vec<PairwiseComparison>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub data: String,
    pub cramers_v: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TestSection {
    pub kruskal: Vec<GroupTest>,
    pub wilcoxon: Vec<SubsetTest>,
    pub chi_square: Vec<SubsetTest>,
    pub cramers_v: Vec<EffectSize>,
    pub dunn: Vec<PairwiseSection>,
    pub mwu: Vec<PairwiseSection>,
}

impl TestSection {
    pub fn is_empty(&self) -> bool {
        self.kruskal.is_empty()
            && self.wilcoxon.is_empty()
            && self.chi_square.is_empty()
            && self.cramers_v.is_empty()
            && self.dunn.is_empty()
            && self.mwu.is_empty()
    }
}

/// Five-number summary of a subset's percentile classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuartileSummary {
    pub subset_id: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub contingency: ContingencyTable,
    pub indicators: Vec<IndicatorColumn>,
    pub tests: TestSection,
    pub quartiles: Vec<QuartileSummary>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn column(&self, key: &str) -> Option<&IndicatorColumn> {
        self.indicators.iter().find(|c| c.key == key)
    }

    /// True when tests were requested and every requested test came out
    /// degenerate, so the run produced no usable test result.
    pub fn requested_tests_degenerate(&self) -> bool {
        let t = &self.tests;
        let mut outcomes: Vec<&Outcome> = Vec::new();
        let requested = &self.metadata.tests;
        if requested.contains(&TestKind::Kruskal) {
            outcomes.extend(t.kruskal.iter().map(|g| &g.outcome));
        }
        if requested.contains(&TestKind::Wilcoxon) {
            outcomes.extend(t.wilcoxon.iter().map(|s| &s.outcome));
        }
        if requested.contains(&TestKind::Chi2) {
            outcomes.extend(t.chi_square.iter().map(|s| &s.outcome));
        }
        let pairwise_done = t.dunn.iter().chain(&t.mwu).any(|p| !p.comparisons.is_empty());
        !outcomes.is_empty()
            && !pairwise_done
            && outcomes.iter().all(|o| !matches!(o, Outcome::Ok(_)))
            && outcomes.iter().any(|o| matches!(o, Outcome::Degenerate(_)))
    }
}

const DECISIONS: [&str; 5] = [
    "percentile = share of the reference set with strictly fewer citations, floored to 0..=99",
    "each paper counts in its own reference set",
    "coauthored papers are scored once and counted once per subset membership",
    "standard error = sample SD (n-1) of per-paper weights / sqrt(n); R(i,k) SE scaled by k*n/N",
    "pairwise comparisons run only when Kruskal-Wallis rejects, unless forced",
];

/// Loads the configured input files and evaluates them.
pub fn run_evaluation(config: &EvaluationConfig) -> Result<Report> {
    let dataset = match &config.input {
        InputSource::Counts { counts_path } => {
            Dataset::Counts(io::load_counts(counts_path, &config.options.scheme).map_err(|e| e.in_stage("load"))?)
        }
        InputSource::Papers {
            papers_path,
            references_path,
        } => {
            let table = io::load_papers_table(papers_path).map_err(|e| e.in_stage("load"))?;
            match (references_path, table.percentile_classes) {
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidInput(
                        "papers file carries percentile classes; do not also pass reference distributions".into(),
                    )
                    .in_stage("load"))
                }
                (None, None) => {
                    return Err(Error::InvalidInput(
                        "papers file has no percentile_class column and no reference distributions were given".into(),
                    )
                    .in_stage("load"))
                }
                (Some(refs), None) => Dataset::Raw {
                    papers: table.papers,
                    refs: io::load_reference_distributions(refs).map_err(|e| e.in_stage("load"))?,
                },
                (None, Some(classes)) => Dataset::Precomputed {
                    papers: table.papers,
                    classes,
                },
            }
        }
    };
    evaluate(&dataset, &config.options)
}

struct Prepared {
    input: &'static str,
    papers: Option<usize>,
    table: ContingencyTable,
    vectors: Option<Vec<PercentileVector>>,
    /// Per-subset citation pairs (observed, reference mean).
    pairs: Option<Vec<Vec<CitationPair>>>,
}

fn prepare_papers(
    papers: &[PaperRecord],
    scores: &BTreeMap<String, PercentileScore>,
    scheme: &ClassScheme,
) -> Result<(ContingencyTable, Vec<PercentileVector>)> {
    let subsets = subset_order(papers);
    if subsets.is_empty() {
        return Err(Error::InvalidInput("no papers".into()));
    }
    let vectors = percentile_vectors(&subsets, papers, scores).map_err(|e| e.in_stage("percentiles"))?;
    let table = contingency_table(&vectors, scheme).map_err(|e| e.in_stage("classify"))?;
    Ok((table, vectors))
}

fn prepare(dataset: &Dataset, scheme: &ClassScheme) -> Result<Prepared> {
    match dataset {
        Dataset::Raw { papers, refs } => {
            let violations = validate_dataset(papers, refs);
            if let Some(first) = violations.first() {
                return Err(
                    Error::InvalidInput(format!("{} violation(s), first: {first}", violations.len()))
                        .in_stage("validate"),
                );
            }
            let scores = assign_percentiles(papers, refs).map_err(|e| e.in_stage("percentiles"))?;
            let (table, vectors) = prepare_papers(papers, &scores, scheme)?;
            let means: BTreeMap<&str, f64> = refs
                .iter()
                .filter_map(|r| r.mean().map(|m| (r.reference_key.as_str(), m)))
                .collect();
            let pairs = table
                .subset_ids
                .iter()
                .map(|s| {
                    papers
                        .iter()
                        .filter(|p| p.subset_ids.contains(s))
                        .map(|p| {
                            CitationPair::new(p.paper_id.clone(), p.citations as f64, means[p.reference_key.as_str()])
                        })
                        .collect()
                })
                .collect();
            Ok(Prepared {
                input: "papers+references",
                papers: Some(papers.len()),
                table,
                vectors: Some(vectors),
                pairs: Some(pairs),
            })
        }
        Dataset::Precomputed { papers, classes } => {
            let mut ids = BTreeSet::new();
            let mut scores = BTreeMap::new();
            for p in papers {
                if !ids.insert(p.paper_id.as_str()) {
                    return Err(
                        Error::InvalidInput(format!("duplicate paper id `{}`", p.paper_id)).in_stage("validate")
                    );
                }
                let class = classes.get(&p.paper_id).ok_or_else(|| {
                    Error::InvalidInput(format!("paper `{}` has no percentile class", p.paper_id)).in_stage("validate")
                })?;
                scores.insert(p.paper_id.clone(), PercentileScore::from_class(*class)?);
            }
            let (table, vectors) = prepare_papers(papers, &scores, scheme)?;
            Ok(Prepared {
                input: "papers+percentile-classes",
                papers: Some(papers.len()),
                table,
                vectors: Some(vectors),
                pairs: None,
            })
        }
        Dataset::Counts(table) => {
            if table.n_cols() != scheme.len() {
                return Err(Error::InvalidInput(format!(
                    "count table has {} classes, scheme `{}` has {}",
                    table.n_cols(),
                    scheme.name(),
                    scheme.len()
                ))
                .in_stage("classify"));
            }
            if table.n_rows() == 0 {
                return Err(Error::InvalidInput("count table has no subsets".into()).in_stage("classify"));
            }
            let mut table = table.clone();
            table.class_labels = scheme.labels();
            Ok(Prepared {
                input: "class-counts",
                papers: None,
                table,
                vectors: None,
                pairs: None,
            })
        }
    }
}

fn scheme_label(scheme: &ClassScheme, across: bool) -> String {
    if across {
        format!("R({},k)", scheme.len())
    } else {
        format!("R({})", scheme.len())
    }
}

fn finish_column(
    key: &str,
    label: String,
    mut results: Vec<IndicatorResult>,
    baseline: Option<f64>,
) -> IndicatorColumn {
    assign_ranks(&mut results);
    let intervals = results
        .iter()
        .map(|r| r.standard_error.map(|se| goldstein_ci(r.value, se)))
        .collect();
    IndicatorColumn {
        key: key.to_string(),
        label,
        results,
        baseline,
        intervals,
    }
}

fn scheme_columns(table: &ContingencyTable, scheme: &ClassScheme, key: &str) -> Result<[IndicatorColumn; 2]> {
    let counts = SubsetClassCounts::from_table(table);
    let ctx = NormalizationContext::from_counts(&counts)?;
    let within = counts.iter().map(|c| r_within(c, scheme)).collect::<Result<Vec<_>>>()?;
    let across = counts
        .iter()
        .map(|c| r_across(c, &ctx, scheme))
        .collect::<Result<Vec<_>>>()?;
    Ok([
        finish_column(key, scheme_label(scheme, false), within, Some(baseline_r(scheme))),
        finish_column(&format!("{key}_k"), scheme_label(scheme, true), across, None),
    ])
}

fn averages_columns(
    subset_ids: &[String],
    pairs: &[Vec<CitationPair>],
    notes: &mut Vec<String>,
) -> Vec<IndicatorColumn> {
    let mut out = Vec::new();
    let ratio: Result<Vec<IndicatorResult>> = subset_ids
        .iter()
        .zip(pairs)
        .map(|(s, p)| {
            Ok(IndicatorResult {
                subset_id: s.clone(),
                value: rate_of_averages(p)?,
                standard_error: None,
                rank: None,
            })
        })
        .collect();
    match ratio {
        Ok(r) => out.push(finish_column("rate_of_averages", "Avg(CPP)/Avg(JCS)".into(), r, None)),
        Err(e) => notes.push(format!("Avg(CPP)/Avg(JCS) not computed: {e}")),
    }
    let rates: Result<Vec<IndicatorResult>> = subset_ids
        .iter()
        .zip(pairs)
        .map(|(s, p)| {
            let m = mean_of_rates(p)?;
            Ok(IndicatorResult {
                subset_id: s.clone(),
                value: m.mean,
                standard_error: m.standard_error,
                rank: None,
            })
        })
        .collect();
    match rates {
        Ok(r) => out.push(finish_column("mean_of_rates", "Avg(CPP/JCS)".into(), r, None)),
        Err(e) => notes.push(format!("Avg(CPP/JCS) not computed: {e}")),
    }
    out
}

/// Type-7 (linear interpolation) quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn quartiles(vectors: &[PercentileVector]) -> Vec<QuartileSummary> {
    vectors
        .iter()
        .filter(|v| !v.is_empty())
        .map(|v| {
            let sorted: Vec<f64> = v.classes().into_iter().map(f64::from).collect();
            QuartileSummary {
                subset_id: v.subset_id.clone(),
                min: sorted[0],
                q1: quantile(&sorted, 0.25),
                median: quantile(&sorted, 0.5),
                q3: quantile(&sorted, 0.75),
                max: sorted[sorted.len() - 1],
            }
        })
        .collect()
}

/// One sample per subset with each paper's class index (0-based).
fn class_samples(table: &ContingencyTable) -> Vec<LabeledSample> {
    table
        .subset_ids
        .iter()
        .zip(&table.counts)
        .map(|(id, row)| {
            let values = row
                .iter()
                .enumerate()
                .flat_map(|(c, &n)| std::iter::repeat_n(c as f64, n as usize))
                .collect();
            LabeledSample::new(id.clone(), values)
        })
        .collect()
}

fn percentile_samples(vectors: &[PercentileVector]) -> Vec<LabeledSample> {
    vectors
        .iter()
        .map(|v| LabeledSample::new(v.subset_id.clone(), v.classes().into_iter().map(f64::from).collect()))
        .collect()
}

/// Drops all-zero columns so sparse percentile tables have defined
/// expected frequencies.
fn without_empty_columns(table: &ContingencyTable) -> Result<ContingencyTable> {
    let keep: Vec<usize> = table
        .column_totals()
        .iter()
        .enumerate()
        .filter(|(_, &t)| t > 0)
        .map(|(i, _)| i)
        .collect();
    ContingencyTable::new(
        table.subset_ids.clone(),
        keep.iter().map(|&i| table.class_labels[i].clone()).collect(),
        table
            .counts
            .iter()
            .map(|row| keep.iter().map(|&i| row[i]).collect())
            .collect(),
    )
}

fn group_tests(
    data: &str,
    samples: &[LabeledSample],
    table: &ContingencyTable,
    options: &EvaluationOptions,
    tests: &mut TestSection,
) {
    let wants_pairwise = options.tests.contains(&TestKind::Dunn) || options.tests.contains(&TestKind::Mwu);
    if !options.tests.contains(&TestKind::Kruskal) && !wants_pairwise {
        return;
    }
    let kw = if samples.len() < 2 {
        Outcome::Skipped("fewer than two subsets".into())
    } else {
        let groups: Vec<Vec<f64>> = samples.iter().map(|s| s.values.clone()).collect();
        Outcome::from_result(kruskal_wallis(&groups))
    };

    let gate = match (&kw, options.force_posthoc) {
        (Outcome::Skipped(reason), _) => Some(reason.clone()),
        (Outcome::Ok(r), false) if !r.significant(options.family_alpha) => Some(format!(
            "Kruskal-Wallis did not reject at alpha {} (p = {:.4})",
            options.family_alpha, r.p_value
        )),
        (Outcome::Degenerate(reason), false) => Some(reason.clone()),
        _ => None,
    };
    tests.kruskal.push(GroupTest {
        data: data.to_string(),
        outcome: kw,
    });

    if options.tests.contains(&TestKind::Kruskal) && samples.len() >= 2 {
        let v = without_empty_columns(table).and_then(|t| cramers_v(&t));
        tests.cramers_v.push(match v {
            Ok(v) => EffectSize {
                data: data.to_string(),
                cramers_v: Some(v),
                note: None,
            },
            Err(e) => EffectSize {
                data: data.to_string(),
                cramers_v: None,
                note: Some(e.to_string()),
            },
        });
    }

    let pairwise = |kind: TestKind, run: fn(&[LabeledSample], f64) -> Result<Vec<PairwiseComparison>>| {
        if !options.tests.contains(&kind) {
            return None;
        }
        Some(match &gate {
            Some(reason) => PairwiseSection {
                data: data.to_string(),
                comparisons: Vec::new(),
                skipped: Some(reason.clone()),
            },
            None => match run(samples, options.family_alpha) {
                Ok(comparisons) => PairwiseSection {
                    data: data.to_string(),
                    comparisons,
                    skipped: None,
                },
                Err(e) => PairwiseSection {
                    data: data.to_string(),
                    comparisons: Vec::new(),
                    skipped: Some(e.to_string()),
                },
            },
        })
    };
    if let Some(s) = pairwise(TestKind::Dunn, dunn_posthoc) {
        tests.dunn.push(s);
    }
    if let Some(s) = pairwise(TestKind::Mwu, pairwise_mann_whitney) {
        tests.mwu.push(s);
    }
}

/// Evaluates an in-memory dataset.
pub fn evaluate(dataset: &Dataset, options: &EvaluationOptions) -> Result<Report> {
    if !(options.family_alpha > 0.0 && options.family_alpha < 1.0) {
        return Err(Error::InvalidInput(format!(
            "family alpha {} outside (0, 1)",
            options.family_alpha
        )));
    }
    let scheme = &options.scheme;
    let prepared = prepare(dataset, scheme)?;
    let table = &prepared.table;
    let mut notes = Vec::new();

    // Indicators.
    let mut indicators = Vec::new();
    if let Some(pairs) = &prepared.pairs {
        indicators.extend(averages_columns(&table.subset_ids, pairs, &mut notes));
    }
    let hundred = hundred_classes();
    let hundred_table = match &prepared.vectors {
        Some(vectors) => Some(contingency_table(vectors, &hundred).map_err(|e| e.in_stage("classify"))?),
        None => None,
    };
    let [within, across] = scheme_columns(table, scheme, "scheme").map_err(|e| e.in_stage("indicators"))?;
    match &hundred_table {
        Some(h) => {
            let [w100, a100] = scheme_columns(h, &hundred, "r100").map_err(|e| e.in_stage("indicators"))?;
            indicators.extend([w100, within, a100, across]);
        }
        None => indicators.extend([within, across]),
    }

    // Tests.
    let mut tests = TestSection::default();
    if options.tests.contains(&TestKind::Wilcoxon) {
        match &prepared.vectors {
            Some(vectors) => {
                for v in vectors {
                    let values: Vec<f64> = v.classes().into_iter().map(f64::from).collect();
                    tests.wilcoxon.push(SubsetTest {
                        subset_id: v.subset_id.clone(),
                        outcome: Outcome::from_result(wilcoxon_signed_rank(
                            &values,
                            MEDIAN_PERCENTILE,
                            Alternative::TwoSided,
                        )),
                    });
                }
            }
            None => notes.push("signed-rank test needs per-paper percentiles; skipped for class counts".into()),
        }
    }
    if options.tests.contains(&TestKind::Chi2) {
        for (id, row) in table.subset_ids.iter().zip(&table.counts) {
            let n: u64 = row.iter().sum();
            let outcome = expected_counts(scheme, n)
                .and_then(|e| chi_square_gof(row, &e))
                .map_or_else(|e| Outcome::Skipped(e.to_string()), Outcome::Ok);
            tests.chi_square.push(SubsetTest {
                subset_id: id.clone(),
                outcome,
            });
        }
    }
    group_tests("classes", &class_samples(table), table, options, &mut tests);
    if let (Some(vectors), Some(h)) = (&prepared.vectors, &hundred_table) {
        group_tests("percentiles", &percentile_samples(vectors), h, options, &mut tests);
    }

    let memberships = table.total();
    let metadata = Metadata {
        input: prepared.input.to_string(),
        papers: prepared.papers,
        memberships,
        subsets: table.n_rows(),
        scheme: scheme.to_config(),
        family_alpha: options.family_alpha,
        pairwise_alpha: bonferroni_alpha(table.n_rows(), options.family_alpha),
        tests: options.tests.iter().copied().collect(),
        force_posthoc: options.force_posthoc,
        decisions: DECISIONS.iter().map(|s| s.to_string()).collect(),
    };
    if let Dataset::Raw { papers, .. } | Dataset::Precomputed { papers, .. } = dataset {
        debug_assert_eq!(membership_count(papers) as u64, memberships);
    }

    Ok(Report {
        metadata,
        contingency: prepared.table,
        indicators,
        tests,
        quartiles: prepared.vectors.as_deref().map(quartiles).unwrap_or_default(),
        notes,
    })
}
