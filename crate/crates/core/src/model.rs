//! Domain types shared by the percentile engine, the indicators and the
//! statistics, plus dataset-level validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One publication.
///
/// A paper may belong to several subsets (coauthored work); every
/// subset-level statistic counts it once per membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub citations: u64,
    pub reference_key: String,
    pub subset_ids: Vec<String>,
}

impl PaperRecord {
    pub fn new(
        paper_id: impl Into<String>,
        citations: u64,
        reference_key: impl Into<String>,
        subset_ids: Vec<String>,
    ) -> Result<Self> {
        let paper_id = paper_id.into();
        if paper_id.trim().is_empty() {
            return Err(Error::InvalidInput("blank paper id".into()));
        }
        if subset_ids.is_empty() {
            return Err(Error::InvalidInput(format!(
                "paper `{paper_id}` has no subset memberships"
            )));
        }
        let mut seen = BTreeSet::new();
        for id in &subset_ids {
            if id.trim().is_empty() {
                return Err(Error::InvalidInput(format!("paper `{paper_id}` has a blank subset id")));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "paper `{paper_id}` lists subset `{id}` twice"
                )));
            }
        }
        Ok(Self {
            paper_id,
            citations,
            reference_key: reference_key.into(),
            subset_ids,
        })
    }
}

/// Citation counts of every comparable paper (same journal, year and
/// document type), the focal papers included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceDistribution {
    pub reference_key: String,
    pub counts: Vec<u64>,
}

impl ReferenceDistribution {
    pub fn new(reference_key: impl Into<String>, counts: Vec<u64>) -> Result<Self> {
        let reference_key = reference_key.into();
        if counts.is_empty() {
            return Err(Error::EmptyReferenceSet(reference_key));
        }
        Ok(Self { reference_key, counts })
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn contains(&self, citations: u64) -> bool {
        self.counts.contains(&citations)
    }

    /// Mean citation count of the reference set, the expected citation
    /// rate of a paper published in it.
    pub fn mean(&self) -> Option<f64> {
        if self.counts.is_empty() {
            return None;
        }
        let sum: f64 = self.counts.iter().map(|&c| c as f64).sum();
        Some(sum / self.counts.len() as f64)
    }
}

/// A paper's position in its reference set: percentile class 0..=99 and
/// rank 1..=100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercentileScore {
    pub percentile_class: u8,
    pub rank: u8,
    pub raw_percentage: f64,
}

impl PercentileScore {
    /// Builds a score from the share (in percent) of strictly-less-cited
    /// reference papers. The class is the floor of the share.
    pub fn from_raw(raw_percentage: f64) -> Result<Self> {
        if !(0.0..100.0).contains(&raw_percentage) {
            return Err(Error::InvalidInput(format!(
                "raw percentage {raw_percentage} outside [0, 100)"
            )));
        }
        let class = raw_percentage.floor() as u8;
        Ok(Self {
            percentile_class: class,
            rank: class + 1,
            raw_percentage,
        })
    }

    /// Builds a score from an already-assigned percentile class. The raw
    /// percentage is unknown and taken as the class itself.
    pub fn from_class(percentile_class: u8) -> Result<Self> {
        if percentile_class > 99 {
            return Err(Error::InvalidInput(format!(
                "percentile class {percentile_class} outside 0..=99"
            )));
        }
        Ok(Self {
            percentile_class,
            rank: percentile_class + 1,
            raw_percentage: f64::from(percentile_class),
        })
    }
}

/// Subsets by classes count matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub subset_ids: Vec<String>,
    pub class_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(subset_ids: Vec<String>, class_labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if subset_ids.len() != counts.len() {
            return Err(Error::InvalidInput(format!(
                "{} subset ids for {} count rows",
                subset_ids.len(),
                counts.len()
            )));
        }
        if let Some(row) = counts.iter().find(|row| row.len() != class_labels.len()) {
            return Err(Error::InvalidInput(format!(
                "count row has {} entries, expected {}",
                row.len(),
                class_labels.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for id in &subset_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateSubset(id.clone()));
            }
        }
        Ok(Self {
            subset_ids,
            class_labels,
            counts,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.counts.len()
    }

    pub fn n_cols(&self) -> usize {
        self.class_labels.len()
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn column_totals(&self) -> Vec<u64> {
        (0..self.n_cols())
            .map(|c| self.counts.iter().map(|row| row[c]).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row(&self, subset_id: &str) -> Option<&[u64]> {
        self.subset_ids
            .iter()
            .position(|id| id == subset_id)
            .map(|i| self.counts[i].as_slice())
    }
}

/// An indicator value for one subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorResult {
    pub subset_id: String,
    pub value: f64,
    pub standard_error: Option<f64>,
    /// Filled by [`crate::indicators::rank_subsets`]; 1 is the highest value.
    pub rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    MissingReferenceSet {
        paper_id: String,
        reference_key: String,
    },
    OwnCountAbsent {
        paper_id: String,
        reference_key: String,
        citations: u64,
    },
    EmptyReferenceSet {
        reference_key: String,
    },
    DuplicatePaper {
        paper_id: String,
    },
    NoSubsets {
        paper_id: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingReferenceSet {
                paper_id,
                reference_key,
            } => write!(f, "paper `{paper_id}`: missing reference set `{reference_key}`"),
            Violation::OwnCountAbsent {
                paper_id,
                reference_key,
                citations,
            } => write!(
                f,
                "paper `{paper_id}`: own count {citations} absent from reference set `{reference_key}`"
            ),
            Violation::EmptyReferenceSet { reference_key } => {
                write!(f, "reference set `{reference_key}` is empty")
            }
            Violation::DuplicatePaper { paper_id } => write!(f, "duplicate paper id `{paper_id}`"),
            Violation::NoSubsets { paper_id } => {
                write!(f, "paper `{paper_id}` belongs to no subset")
            }
        }
    }
}

/// Checks a dataset for structural problems. The result is sorted, so it
/// does not depend on the order of the input lists; an empty list means
/// the dataset is valid.
pub fn validate_dataset(papers: &[PaperRecord], refs: &[ReferenceDistribution]) -> Vec<Violation> {
    let mut violations = BTreeSet::new();
    let mut by_key: BTreeMap<&str, Vec<&ReferenceDistribution>> = BTreeMap::new();
    for r in refs {
        by_key.entry(r.reference_key.as_str()).or_default().push(r);
        if r.counts.is_empty() {
            violations.insert(Violation::EmptyReferenceSet {
                reference_key: r.reference_key.clone(),
            });
        }
    }

    let mut ids = BTreeSet::new();
    for p in papers {
        if !ids.insert(p.paper_id.as_str()) {
            violations.insert(Violation::DuplicatePaper {
                paper_id: p.paper_id.clone(),
            });
        }
        if p.subset_ids.is_empty() {
            violations.insert(Violation::NoSubsets {
                paper_id: p.paper_id.clone(),
            });
        }
        match by_key.get(p.reference_key.as_str()) {
            None => {
                violations.insert(Violation::MissingReferenceSet {
                    paper_id: p.paper_id.clone(),
                    reference_key: p.reference_key.clone(),
                });
            }
            Some(dists) => {
                if !dists.iter().any(|d| d.contains(p.citations)) {
                    violations.insert(Violation::OwnCountAbsent {
                        paper_id: p.paper_id.clone(),
                        reference_key: p.reference_key.clone(),
                        citations: p.citations,
                    });
                }
            }
        }
    }
    violations.into_iter().collect()
}

/// Total subset memberships over all papers.
pub fn membership_count(papers: &[PaperRecord]) -> usize {
    papers.iter().map(|p| p.subset_ids.len()).sum()
}

/// Subset ids in order of first appearance.
pub fn subset_order(papers: &[PaperRecord]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    for p in papers {
        for s in &p.subset_ids {
            if seen.insert(s.as_str()) {
                order.push(s.clone());
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper(id: &str, c: u64, key: &str, subsets: &[&str]) -> PaperRecord {
        PaperRecord::new(id, c, key, subsets.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn well_formed_dataset_is_valid() {
        let papers = vec![paper("p1", 4, "J", &["A"])];
        let refs = vec![ReferenceDistribution::new("J", vec![0, 4, 9]).unwrap()];
        assert!(validate_dataset(&papers, &refs).is_empty());
    }

    #[test]
    fn missing_reference_set() {
        let papers = vec![paper("p1", 4, "X", &["A"])];
        let v = validate_dataset(&papers, &[]);
        assert_eq!(
            v,
            vec![Violation::MissingReferenceSet {
                paper_id: "p1".into(),
                reference_key: "X".into()
            }]
        );
    }

    #[test]
    fn own_count_absent() {
        let papers = vec![paper("p1", 9, "J", &["A"])];
        let refs = vec![ReferenceDistribution::new("J", vec![0, 1, 2]).unwrap()];
        let v = validate_dataset(&papers, &refs);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::OwnCountAbsent { citations: 9, .. }));
    }

    #[test]
    fn validation_is_order_insensitive() {
        let mut papers = vec![
            paper("p1", 9, "J", &["A"]),
            paper("p2", 1, "K", &["B"]),
            paper("p3", 2, "J", &["A", "B"]),
        ];
        let mut refs = vec![
            ReferenceDistribution::new("J", vec![0, 1, 2]).unwrap(),
            ReferenceDistribution::new("L", vec![3]).unwrap(),
        ];
        let a = validate_dataset(&papers, &refs);
        papers.reverse();
        refs.reverse();
        let b = validate_dataset(&papers, &refs);
        assert_eq!(a, b);
        assert_eq!(a, validate_dataset(&papers, &refs));
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn record_invariants() {
        assert!(PaperRecord::new("p", 1, "J", vec![]).is_err());
        assert!(PaperRecord::new("p", 1, "J", vec!["A".into(), "A".into()]).is_err());
        assert!(PaperRecord::new(" ", 1, "J", vec!["A".into()]).is_err());
        assert!(ReferenceDistribution::new("J", vec![]).is_err());
    }

    #[test]
    fn memberships_count_multi_subset_papers_once_each() {
        let papers = vec![paper("p1", 1, "J", &["A", "B"]), paper("p2", 1, "J", &["B"])];
        assert_eq!(membership_count(&papers), 3);
        assert_eq!(subset_order(&papers), vec!["A", "B"]);
    }

    #[test]
    fn score_from_raw() {
        let s = PercentileScore::from_raw(65.4).unwrap();
        assert_eq!((s.percentile_class, s.rank), (65, 66));
        assert!(PercentileScore::from_raw(100.0).is_err());
        assert!(PercentileScore::from_class(100).is_err());
    }

    #[test]
    fn table_margins() {
        let t = ContingencyTable::new(
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into()],
            vec![vec![1, 2], vec![3, 4]],
        )
        .unwrap();
        assert_eq!(t.row_totals(), vec![3, 7]);
        assert_eq!(t.column_totals(), vec![4, 6]);
        assert_eq!(t.total(), 10);
        assert_eq!(t.row("b"), Some(&[3, 4][..]));
    }
}
