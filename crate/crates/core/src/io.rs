//! Input files.
//!
//! Papers: CSV with a mandatory header
//! `paper_id,citations,reference_key,subset_ids[,percentile_class]`,
//! subset ids separated by `;`. The optional fifth column carries
//! precomputed percentile classes (0..=99).
//!
//! Reference distributions: CSV with header `reference_key,counts`, the
//! counts space-separated.
//!
//! Class counts: CSV with header `subset_id,<class label>...` and one row
//! of per-class counts per subset.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{ContingencyTable, PaperRecord, ReferenceDistribution};
use crate::scheme::ClassScheme;

const PAPER_COLUMNS: [&str; 4] = ["paper_id", "citations", "reference_key", "subset_ids"];
const CLASS_COLUMN: &str = "percentile_class";

/// Contents of a papers file.
#[derive(Debug, Clone, PartialEq)]
pub struct PapersTable {
    pub papers: Vec<PaperRecord>,
    /// Present when the file has a `percentile_class` column.
    pub percentile_classes: Option<BTreeMap<String, u8>>,
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

fn parse_count(field: &str, what: &str, line: u64) -> Result<u64> {
    if field.starts_with('-') {
        return Err(Error::Parse {
            line,
            message: format!("negative {what} `{field}`"),
        });
    }
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} `{field}`"),
    })
}

fn check_header(headers: &csv::StringRecord, expected: &[&str], line: u64) -> Result<()> {
    for (i, name) in expected.iter().enumerate() {
        match headers.get(i) {
            Some(h) if h.eq_ignore_ascii_case(name) => {}
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!(
                        "header column {} is `{}`, expected `{name}`",
                        i + 1,
                        other.unwrap_or("")
                    ),
                })
            }
        }
    }
    Ok(())
}

pub fn read_papers<R: Read>(input: R) -> Result<PapersTable> {
    let mut rdr = reader(input);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    check_header(&headers, &PAPER_COLUMNS, 1)?;
    let with_classes = match headers.len() {
        4 => false,
        5 if headers[4].eq_ignore_ascii_case(CLASS_COLUMN) => true,
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("unexpected header `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            })
        }
    };

    let mut papers = Vec::new();
    let mut classes = BTreeMap::new();
    let mut ids = BTreeSet::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        let id = &record[0];
        if id.is_empty() {
            return Err(Error::Parse {
                line,
                message: "blank paper id".into(),
            });
        }
        if !ids.insert(id.to_string()) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate paper id `{id}`"),
            });
        }
        let citations = parse_count(&record[1], "citation count", line)?;
        let subsets: Vec<String> = record[3]
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        let paper = PaperRecord::new(id, citations, &record[2], subsets).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if with_classes {
            let class = parse_count(&record[4], "percentile class", line)?;
            if class > 99 {
                return Err(Error::Parse {
                    line,
                    message: format!("percentile class {class} outside 0..=99"),
                });
            }
            classes.insert(paper.paper_id.clone(), class as u8);
        }
        papers.push(paper);
    }
    Ok(PapersTable {
        papers,
        percentile_classes: with_classes.then_some(classes),
    })
}

pub fn load_papers_table(path: impl AsRef<Path>) -> Result<PapersTable> {
    read_papers(open(path.as_ref())?)
}

pub fn load_papers(path: impl AsRef<Path>) -> Result<Vec<PaperRecord>> {
    Ok(load_papers_table(path)?.papers)
}

pub fn write_papers<W: Write>(out: W, papers: &[PaperRecord], classes: Option<&BTreeMap<String, u8>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = PAPER_COLUMNS.to_vec();
    if classes.is_some() {
        header.push(CLASS_COLUMN);
    }
    w.write_record(&header).map_err(csv_error)?;
    for p in papers {
        let mut row = vec![
            p.paper_id.clone(),
            p.citations.to_string(),
            p.reference_key.clone(),
            p.subset_ids.join(";"),
        ];
        if let Some(classes) = classes {
            let class = classes
                .get(&p.paper_id)
                .ok_or_else(|| Error::InvalidInput(format!("no percentile class for `{}`", p.paper_id)))?;
            row.push(class.to_string());
        }
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn read_reference_distributions<R: Read>(input: R) -> Result<Vec<ReferenceDistribution>> {
    let mut rdr = reader(input);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    check_header(&headers, &["reference_key", "counts"], 1)?;
    let mut keys = BTreeSet::new();
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let key = &record[0];
        if key.is_empty() {
            return Err(Error::Parse {
                line,
                message: "blank reference key".into(),
            });
        }
        if !keys.insert(key.to_string()) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate reference key `{key}`"),
            });
        }
        let counts = record[1]
            .split_whitespace()
            .map(|c| parse_count(c, "citation count", line))
            .collect::<Result<Vec<_>>>()?;
        let dist = ReferenceDistribution::new(key, counts).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        out.push(dist);
    }
    Ok(out)
}

pub fn load_reference_distributions(path: impl AsRef<Path>) -> Result<Vec<ReferenceDistribution>> {
    read_reference_distributions(open(path.as_ref())?)
}

pub fn write_reference_distributions<W: Write>(out: W, refs: &[ReferenceDistribution]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["reference_key", "counts"]).map_err(csv_error)?;
    for r in refs {
        let counts = r.counts.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        w.write_record([r.reference_key.as_str(), counts.as_str()])
            .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Reads a subsets-by-classes count table. The number of count columns
/// must match the scheme; class labels are taken from the scheme.
pub fn read_counts<R: Read>(input: R, scheme: &ClassScheme) -> Result<ContingencyTable> {
    let mut rdr = reader(input);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    check_header(&headers, &["subset_id"], 1)?;
    if headers.len() != scheme.len() + 1 {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "{} count columns, scheme `{}` has {} classes",
                headers.len().saturating_sub(1),
                scheme.name(),
                scheme.len()
            ),
        });
    }
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        if record[0].is_empty() {
            return Err(Error::Parse {
                line,
                message: "blank subset id".into(),
            });
        }
        if ids.iter().any(|id| id == &record[0]) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate subset `{}`", &record[0]),
            });
        }
        ids.push(record[0].to_string());
        rows.push(
            record
                .iter()
                .skip(1)
                .map(|c| parse_count(c, "class count", line))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if ids.is_empty() {
        return Err(Error::InvalidInput("count table has no subsets".into()));
    }
    ContingencyTable::new(ids, scheme.labels(), rows)
}

pub fn load_counts(path: impl AsRef<Path>, scheme: &ClassScheme) -> Result<ContingencyTable> {
    read_counts(open(path.as_ref())?, scheme)
}
