//! Percentile assignment against reference distributions.
//!
//! A paper's raw percentage is the share of its reference set cited
//! strictly less often than the paper itself; tied papers do not count.
//! The class is the floor of that share, so it always lies in 0..=99 and
//! uncited papers land in class 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PaperRecord, PercentileScore, ReferenceDistribution};

pub const PERCENTILE_BINS: usize = 100;

/// Number of papers of one subset in each percentile class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PercentileVector {
    pub subset_id: String,
    pub bins: Vec<u64>,
}

impl PercentileVector {
    pub fn empty(subset_id: impl Into<String>) -> Self {
        Self {
            subset_id: subset_id.into(),
            bins: vec![0; PERCENTILE_BINS],
        }
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Expands the bins into one percentile class per paper, ascending.
    pub fn classes(&self) -> Vec<u8> {
        self.bins
            .iter()
            .enumerate()
            .flat_map(|(class, &n)| std::iter::repeat_n(class as u8, n as usize))
            .collect()
    }
}

fn percentile_in_sorted(citations: u64, sorted: &[u64]) -> PercentileScore {
    let fewer = sorted.partition_point(|&c| c < citations);
    let raw = 100.0 * fewer as f64 / sorted.len() as f64;
    // fewer < len whenever the paper is in its own reference set; clamp the
    // foreign-count case so the class stays within 0..=99.
    let raw = if fewer == sorted.len() {
        100.0 * (fewer - 1) as f64 / sorted.len() as f64
    } else {
        raw
    };
    PercentileScore::from_raw(raw).expect("raw percentage below 100")
}

/// Scores one citation count against a reference distribution.
///
/// If `citations` exceeds every entry of the reference set (the paper is
/// not part of it) the score is capped at the highest attainable class,
/// `(len - 1) / len`.
pub fn compute_percentile(citations: u64, reference: &ReferenceDistribution) -> Result<PercentileScore> {
    if reference.counts.is_empty() {
        return Err(Error::EmptyReferenceSet(reference.reference_key.clone()));
    }
    let mut sorted = reference.counts.clone();
    sorted.sort_unstable();
    Ok(percentile_in_sorted(citations, &sorted))
}

/// Scores every paper against its reference set. Each paper is scored
/// once, however many subsets it belongs to.
pub fn assign_percentiles(
    papers: &[PaperRecord],
    refs: &[ReferenceDistribution],
) -> Result<BTreeMap<String, PercentileScore>> {
    let mut sorted: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for r in refs {
        if r.counts.is_empty() {
            return Err(Error::EmptyReferenceSet(r.reference_key.clone()));
        }
        let mut counts = r.counts.clone();
        counts.sort_unstable();
        if sorted.insert(r.reference_key.as_str(), counts).is_some() {
            return Err(Error::InvalidInput(format!(
                "duplicate reference set `{}`",
                r.reference_key
            )));
        }
    }

    let mut scores = BTreeMap::new();
    for p in papers {
        let counts = sorted
            .get(p.reference_key.as_str())
            .ok_or_else(|| Error::MissingReferenceSet {
                paper_id: p.paper_id.clone(),
                reference_key: p.reference_key.clone(),
            })?;
        let score = percentile_in_sorted(p.citations, counts);
        if scores.insert(p.paper_id.clone(), score).is_some() {
            return Err(Error::InvalidInput(format!("duplicate paper id `{}`", p.paper_id)));
        }
    }
    Ok(scores)
}

/// Tallies the percentile classes of one subset's members.
pub fn percentile_vector(
    subset_id: &str,
    papers: &[PaperRecord],
    scores: &BTreeMap<String, PercentileScore>,
) -> Result<PercentileVector> {
    let mut vector = PercentileVector::empty(subset_id);
    let mut known = false;
    for p in papers {
        if !p.subset_ids.iter().any(|s| s == subset_id) {
            continue;
        }
        known = true;
        let score = scores
            .get(&p.paper_id)
            .ok_or_else(|| Error::InvalidInput(format!("paper `{}` has no percentile score", p.paper_id)))?;
        vector.bins[score.percentile_class as usize] += 1;
    }
    if !known {
        return Err(Error::UnknownSubset(subset_id.to_string()));
    }
    Ok(vector)
}

/// One vector per subset, in the given order.
pub fn percentile_vectors(
    subset_ids: &[String],
    papers: &[PaperRecord],
    scores: &BTreeMap<String, PercentileScore>,
) -> Result<Vec<PercentileVector>> {
    subset_ids
        .iter()
        .map(|s| percentile_vector(s, papers, scores))
        .collect()
}
