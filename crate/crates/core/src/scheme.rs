//! Evaluation schemes: ordered percentile-class bins with weights and the
//! proportions expected under random attribution.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ContingencyTable, PercentileScore};
use crate::percentile::{PercentileVector, PERCENTILE_BINS};

const PROPORTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeClass {
    /// Lowest percentile class (0..=99) falling into this class.
    pub lower_bound: u8,
    pub weight: f64,
    pub expected_proportion: f64,
}

/// Classes cover half-open intervals `[lower_bound_j, lower_bound_j+1)`;
/// the last class is unbounded above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemeConfig", into = "SchemeConfig")]
pub struct ClassScheme {
    name: String,
    classes: Vec<SchemeClass>,
}

/// On-disk form of a scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub name: String,
    pub classes: Vec<SchemeClass>,
}

impl TryFrom<SchemeConfig> for ClassScheme {
    type Error = Error;

    fn try_from(config: SchemeConfig) -> Result<Self> {
        ClassScheme::new(config.name, config.classes)
    }
}

impl From<ClassScheme> for SchemeConfig {
    fn from(scheme: ClassScheme) -> Self {
        SchemeConfig {
            name: scheme.name,
            classes: scheme.classes,
        }
    }
}

impl ClassScheme {
    pub fn new(name: impl Into<String>, classes: Vec<SchemeClass>) -> Result<Self> {
        let name = name.into();
        let invalid = |msg: String| Err(Error::InvalidScheme(format!("{name}: {msg}")));
        if classes.is_empty() {
            return invalid("no classes".into());
        }
        if classes[0].lower_bound != 0 {
            return invalid(format!("first lower bound is {}, expected 0", classes[0].lower_bound));
        }
        for pair in classes.windows(2) {
            if pair[1].lower_bound <= pair[0].lower_bound {
                return invalid(format!(
                    "lower bounds not strictly increasing ({} then {})",
                    pair[0].lower_bound, pair[1].lower_bound
                ));
            }
        }
        if let Some(c) = classes.iter().find(|c| c.lower_bound as usize >= PERCENTILE_BINS) {
            return invalid(format!("lower bound {} above 99", c.lower_bound));
        }
        for c in &classes {
            if !c.weight.is_finite() || c.weight < 0.0 {
                return invalid(format!("weight {} is negative or not finite", c.weight));
            }
            if !(0.0..=1.0).contains(&c.expected_proportion) {
                return invalid(format!("expected proportion {} outside [0, 1]", c.expected_proportion));
            }
        }
        let total: f64 = classes.iter().map(|c| c.expected_proportion).sum();
        if (total - 1.0).abs() > PROPORTION_TOLERANCE {
            return invalid(format!("expected proportions sum to {total}, not 1"));
        }
        Ok(Self { name, classes })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn classes(&self) -> &[SchemeClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.weight).collect()
    }

    pub fn min_weight(&self) -> f64 {
        self.classes.iter().map(|c| c.weight).fold(f64::INFINITY, f64::min)
    }

    pub fn max_weight(&self) -> f64 {
        self.classes.iter().map(|c| c.weight).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the class holding `percentile_class`: the last class whose
    /// lower bound does not exceed it.
    pub fn class_index(&self, percentile_class: u8) -> usize {
        self.classes.partition_point(|c| c.lower_bound <= percentile_class) - 1
    }

    /// Human-readable interval labels, e.g. `<50`, `[50;75[`, `>=99`.
    pub fn labels(&self) -> Vec<String> {
        let n = self.classes.len();
        (0..n)
            .map(|i| {
                let lo = self.classes[i].lower_bound;
                match (i, self.classes.get(i + 1)) {
                    (_, None) if n == 1 => "all".to_string(),
                    (_, None) => format!(">={lo}"),
                    (_, Some(next)) if next.lower_bound == lo + 1 => format!("{lo}"),
                    (0, Some(next)) => format!("<{}", next.lower_bound),
                    (_, Some(next)) => format!("[{lo};{}[", next.lower_bound),
                }
            })
            .collect()
    }

    pub fn to_config(&self) -> SchemeConfig {
        self.clone().into()
    }
}

/// The six percentile impact classes: bottom-50%, [50;75[, [75;90[,
/// [90;95[, [95;99[ and top-1%, weighted 1 to 6.
pub fn builtin_nsf6() -> ClassScheme {
    let spec = [
        (0, 1.0, 0.50),
        (50, 2.0, 0.25),
        (75, 3.0, 0.15),
        (90, 4.0, 0.05),
        (95, 5.0, 0.04),
        (99, 6.0, 0.01),
    ];
    let classes = spec
        .into_iter()
        .map(|(lower_bound, weight, expected_proportion)| SchemeClass {
            lower_bound,
            weight,
            expected_proportion,
        })
        .collect();
    ClassScheme::new("nsf6", classes).expect("built-in scheme is valid")
}

/// One class per percentile with the rank (1..=100) as weight. Under this
/// scheme the weighted mean equals the mean percentile rank.
pub fn hundred_classes() -> ClassScheme {
    let classes = (0..PERCENTILE_BINS as u8)
        .map(|p| SchemeClass {
            lower_bound: p,
            weight: f64::from(p) + 1.0,
            expected_proportion: 0.01,
        })
        .collect();
    ClassScheme::new("r100", classes).expect("built-in scheme is valid")
}

/// Resolves a built-in scheme by name.
pub fn builtin(name: &str) -> Option<ClassScheme> {
    match name.to_ascii_lowercase().as_str() {
        "nsf6" => Some(builtin_nsf6()),
        "r100" => Some(hundred_classes()),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassAssignment {
    pub paper_id: String,
    pub class_index: usize,
    pub weight: f64,
}

pub fn classify(paper_id: &str, score: &PercentileScore, scheme: &ClassScheme) -> ClassAssignment {
    let class_index = scheme.class_index(score.percentile_class);
    ClassAssignment {
        paper_id: paper_id.to_string(),
        class_index,
        weight: scheme.classes[class_index].weight,
    }
}

/// Folds each subset's percentile bins into scheme classes. Rows follow
/// the order of `vectors`.
pub fn contingency_table(vectors: &[PercentileVector], scheme: &ClassScheme) -> Result<ContingencyTable> {
    if vectors.is_empty() {
        return Err(Error::InvalidInput("no percentile vectors".into()));
    }
    let counts = vectors
        .iter()
        .map(|v| {
            let mut row = vec![0u64; scheme.len()];
            for (class, &n) in v.bins.iter().enumerate() {
                row[scheme.class_index(class as u8)] += n;
            }
            row
        })
        .collect();
    ContingencyTable::new(
        vectors.iter().map(|v| v.subset_id.clone()).collect(),
        scheme.labels(),
        counts,
    )
}

/// Counts expected in each class for a subset of `n` papers.
pub fn expected_counts(scheme: &ClassScheme, n: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidInput("expected counts need n > 0".into()));
    }
    Ok(scheme
        .classes
        .iter()
        .map(|c| n as f64 * c.expected_proportion)
        .collect())
}

pub fn load_scheme(config: SchemeConfig) -> Result<ClassScheme> {
    ClassScheme::try_from(config)
}

/// Parses a scheme definition; JSON when the text starts with `{`, TOML
/// otherwise.
pub fn parse_scheme(text: &str) -> Result<ClassScheme> {
    let config: SchemeConfig = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::InvalidScheme(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| Error::InvalidScheme(e.to_string()))?
    };
    load_scheme(config)
}

pub fn scheme_to_toml(scheme: &ClassScheme) -> String {
    toml::to_string(&scheme.to_config()).expect("scheme serializes")
}

/// Reads a scheme file, or resolves a built-in name such as `nsf6`.
pub fn load_scheme_file(path_or_name: &str) -> Result<ClassScheme> {
    if let Some(scheme) = builtin(path_or_name) {
        return Ok(scheme);
    }
    let path = Path::new(path_or_name);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scheme(&text)
}
