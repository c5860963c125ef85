//! Report rendering. Text mirrors the usual indicator-table layout
//! (`2.83(±0.38) [1]`); CSV and JSON keep full precision.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Outcome, PairwiseSection, Report, MEDIAN_PERCENTILE};
use crate::stats::{format_alpha, Interval, TestResult, GOLDSTEIN_FACTOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" | "structured" => Ok(Format::Json),
            other => Err(Error::InvalidInput(format!("unknown format `{other}`"))),
        }
    }
}

pub fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Text => render_text(report),
        Format::Csv => render_csv(report),
        Format::Json => render_json(report),
    }
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// `*` when `p` is below `alpha`.
fn star(p: f64, alpha: f64) -> &'static str {
    if p < alpha {
        "*"
    } else {
        ""
    }
}

/// `2.83(±0.38) [1]`
pub fn indicator_cell(value: f64, se: Option<f64>, rank: Option<usize>) -> String {
    let mut s = format!("{value:.2}");
    if let Some(se) = se {
        let _ = write!(s, "(±{se:.2})");
    }
    if let Some(rank) = rank {
        let _ = write!(s, " [{rank}]");
    }
    s
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut l = String::new();
        for (i, cell) in cells.iter().enumerate() {
            let pad = widths[i] - cell.chars().count();
            if i == 0 {
                l.push_str(cell);
                l.push_str(&" ".repeat(pad));
            } else {
                l.push_str("  ");
                l.push_str(&" ".repeat(pad));
                l.push_str(cell);
            }
        }
        l.trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(header));
    for row in rows {
        let _ = writeln!(out, "{}", line(row));
    }
}

fn strings<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

fn outcome_cells(outcome: &Outcome, f: impl Fn(&TestResult) -> Vec<String>, width: usize) -> Vec<String> {
    match outcome {
        Outcome::Ok(r) => f(r),
        Outcome::Degenerate(why) | Outcome::Skipped(why) => {
            let mut v = vec![String::new(); width];
            if let Some(last) = v.last_mut() {
                *last = why.clone();
            }
            v
        }
    }
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let m = &report.metadata;
    let alpha = m.family_alpha;
    let _ = writeln!(out, "Percentile-rank evaluation");
    let _ = writeln!(
        out,
        "input: {}   subsets (k): {}   memberships (N): {}{}",
        m.input,
        m.subsets,
        m.memberships,
        m.papers.map(|p| format!("   papers: {p}")).unwrap_or_default()
    );
    let _ = writeln!(
        out,
        "scheme: {} ({} classes)   family alpha: {}   pairwise alpha: {}",
        m.scheme.name,
        m.scheme.classes.len(),
        format_alpha(alpha),
        format_alpha(m.pairwise_alpha)
    );

    // Contingency table.
    let c = &report.contingency;
    let _ = writeln!(out, "\nPercentile rank classes by subset");
    let mut header = strings(["class", "weight"]);
    header.extend(c.subset_ids.iter().cloned());
    header.push("Total".into());
    let col_totals = c.column_totals();
    let mut rows: Vec<Vec<String>> = c
        .class_labels
        .iter()
        .enumerate()
        .map(|(j, label)| {
            let mut row = vec![label.clone(), format!("{}", m.scheme.classes[j].weight)];
            row.extend(c.counts.iter().map(|r| r[j].to_string()));
            row.push(col_totals[j].to_string());
            row
        })
        .collect();
    let mut total = strings(["Total", ""]);
    total.extend(c.row_totals().iter().map(u64::to_string));
    total.push(c.total().to_string());
    rows.push(total);
    table(&mut out, &header, &rows);

    // Indicators.
    if !report.indicators.is_empty() {
        let _ = writeln!(out, "\nIndicators (standard errors in parentheses, ranks in brackets)");
        let mut header = strings(["subset"]);
        header.extend(report.indicators.iter().map(|c| c.label.clone()));
        let rows: Vec<Vec<String>> = c
            .subset_ids
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let mut row = vec![id.clone()];
                row.extend(report.indicators.iter().map(|col| {
                    let r = &col.results[i];
                    indicator_cell(r.value, r.standard_error, r.rank)
                }));
                row
            })
            .collect();
        table(&mut out, &header, &rows);
        for col in &report.indicators {
            if let Some(b) = col.baseline {
                let _ = writeln!(out, "random-attribution baseline {} = {b:.2}", col.label);
            }
        }

        let with_ci: Vec<_> = report
            .indicators
            .iter()
            .filter(|c| c.intervals.iter().any(Option::is_some))
            .collect();
        if !with_ci.is_empty() {
            let _ = writeln!(out, "\nGoldstein-adjusted intervals (value ± {GOLDSTEIN_FACTOR}·SE)");
            let mut header = strings(["subset"]);
            header.extend(with_ci.iter().map(|c| c.label.clone()));
            let fmt = |i: &Option<Interval>| {
                i.map(|i| format!("[{:.2}, {:.2}]", i.lower, i.upper))
                    .unwrap_or_default()
            };
            let rows: Vec<Vec<String>> = c
                .subset_ids
                .iter()
                .enumerate()
                .map(|(i, id)| {
                    let mut row = vec![id.clone()];
                    row.extend(with_ci.iter().map(|col| fmt(&col.intervals[i])));
                    row
                })
                .collect();
            table(&mut out, &header, &rows);
        }
    }

    let t = &report.tests;
    if !t.kruskal.is_empty() {
        let _ = writeln!(out, "\nKruskal-Wallis");
        let rows: Vec<Vec<String>> = t
            .kruskal
            .iter()
            .map(|g| {
                let mut row = vec![g.data.clone()];
                row.extend(outcome_cells(
                    &g.outcome,
                    |r| {
                        vec![
                            format!("{:.2}{}", r.statistic, star(r.p_value, alpha)),
                            r.degrees_of_freedom.map(|d| d.to_string()).unwrap_or_default(),
                            format!("{:.4}", r.p_value),
                        ]
                    },
                    3,
                ));
                row
            })
            .collect();
        table(&mut out, &strings(["data", "H", "df", "p"]), &rows);
        for e in &t.cramers_v {
            match e.cramers_v {
                Some(v) => {
                    let _ = writeln!(out, "Cramér's V ({}): {v:.2}", e.data);
                }
                None => {
                    let _ = writeln!(out, "Cramér's V ({}): {}", e.data, e.note.as_deref().unwrap_or(""));
                }
            }
        }
    }

    if !t.wilcoxon.is_empty() {
        let _ = writeln!(
            out,
            "\nSigned-rank test of percentile classes against median {MEDIAN_PERCENTILE}"
        );
        let rows: Vec<Vec<String>> = t
            .wilcoxon
            .iter()
            .map(|s| {
                let mut row = vec![s.subset_id.clone()];
                row.extend(outcome_cells(
                    &s.outcome,
                    |r| {
                        vec![
                            format!("{:.1}", r.statistic),
                            r.standardized
                                .map(|z| format!("{z:.2}{}", star(r.p_value, alpha)))
                                .unwrap_or_default(),
                            format!("{:.4}", r.p_value),
                            r.method.to_string(),
                        ]
                    },
                    4,
                ));
                row
            })
            .collect();
        table(&mut out, &strings(["subset", "W+", "z", "p", "method"]), &rows);
    }

    if !t.chi_square.is_empty() {
        let _ = writeln!(
            out,
            "\nChi-squared goodness of fit against the expected class proportions"
        );
        let rows: Vec<Vec<String>> = t
            .chi_square
            .iter()
            .map(|s| {
                let mut row = vec![s.subset_id.clone()];
                row.extend(outcome_cells(
                    &s.outcome,
                    |r| {
                        vec![
                            format!("{:.2}{}", r.statistic, star(r.p_value, alpha)),
                            r.degrees_of_freedom.map(|d| d.to_string()).unwrap_or_default(),
                            format!("{:.4}", r.p_value),
                            if r.advisory {
                                format!("advisory: {}", r.notes.join("; "))
                            } else {
                                String::new()
                            },
                        ]
                    },
                    4,
                ));
                row
            })
            .collect();
        table(&mut out, &strings(["subset", "chi2", "df", "p", "validity"]), &rows);
    }

    pairwise_text(&mut out, "Dunn post-hoc", &t.dunn);
    pairwise_text(&mut out, "Mann-Whitney U", &t.mwu);

    if !report.notes.is_empty() {
        let _ = writeln!(out, "\nNotes");
        for n in &report.notes {
            let _ = writeln!(out, "- {n}");
        }
    }
    let _ = writeln!(out, "\n* p < {}", format_alpha(alpha));
    out
}

fn pairwise_text(out: &mut String, title: &str, sections: &[PairwiseSection]) {
    for s in sections {
        let alpha = s.comparisons.first().map(|c| c.adjusted_alpha);
        let _ = writeln!(
            out,
            "\n{title} ({}){}",
            s.data,
            alpha
                .map(|a| format!(", pairwise alpha {}", format_alpha(a)))
                .unwrap_or_default()
        );
        if let Some(reason) = &s.skipped {
            let _ = writeln!(out, "skipped: {reason}");
            continue;
        }
        let rows: Vec<Vec<String>> = s
            .comparisons
            .iter()
            .map(|c| {
                vec![
                    format!("{} - {}", c.subset_a, c.subset_b),
                    format!("{:.2}", c.z_statistic),
                    format!("{:.4}", c.p_value),
                    if c.significant { "*".into() } else { String::new() },
                    c.confidence_interval
                        .map(|i| format!("{:.2} - {:.2}", i.lower, i.upper))
                        .unwrap_or_default(),
                ]
            })
            .collect();
        table(out, &strings(["pair", "z", "p", "sig", "interval"]), &rows);
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn outcome_row(outcome: &Outcome) -> Vec<String> {
    match outcome {
        Outcome::Ok(r) => vec![
            "ok".into(),
            r.statistic.to_string(),
            opt(r.degrees_of_freedom),
            r.p_value.to_string(),
            opt(r.standardized),
            r.method.to_string(),
            r.advisory.to_string(),
            r.notes.join("; "),
        ],
        Outcome::Degenerate(why) => vec![
            "degenerate".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            why.clone(),
        ],
        Outcome::Skipped(why) => vec![
            "skipped".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            why.clone(),
        ],
    }
}

const OUTCOME_HEADER: [&str; 8] = [
    "status",
    "statistic",
    "df",
    "p_value",
    "standardized",
    "method",
    "advisory",
    "notes",
];

fn render_csv(report: &Report) -> String {
    let mut buf = Vec::new();
    {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(&mut buf);
        let section = |w: &mut csv::Writer<&mut Vec<u8>>, name: &str, header: Vec<String>, rows: Vec<Vec<String>>| {
            w.write_record([format!("# {name}")]).expect("in-memory write");
            w.write_record(&header).expect("in-memory write");
            for r in rows {
                w.write_record(&r).expect("in-memory write");
            }
        };
        let m = &report.metadata;
        section(
            &mut w,
            "metadata",
            strings(["key", "value"]),
            vec![
                strings(["input", &m.input]),
                vec!["papers".into(), opt(m.papers)],
                vec!["memberships".into(), m.memberships.to_string()],
                vec!["subsets".into(), m.subsets.to_string()],
                vec!["scheme".into(), m.scheme.name.clone()],
                vec!["family_alpha".into(), m.family_alpha.to_string()],
                vec!["pairwise_alpha".into(), m.pairwise_alpha.to_string()],
                vec!["force_posthoc".into(), m.force_posthoc.to_string()],
            ],
        );

        let c = &report.contingency;
        let mut header = strings(["subset_id"]);
        header.extend(c.class_labels.iter().cloned());
        section(
            &mut w,
            "contingency",
            header,
            c.subset_ids
                .iter()
                .zip(&c.counts)
                .map(|(id, row)| {
                    std::iter::once(id.clone())
                        .chain(row.iter().map(u64::to_string))
                        .collect()
                })
                .collect(),
        );

        let mut rows = Vec::new();
        for col in &report.indicators {
            for (r, ci) in col.results.iter().zip(&col.intervals) {
                rows.push(vec![
                    col.key.clone(),
                    col.label.clone(),
                    r.subset_id.clone(),
                    r.value.to_string(),
                    opt(r.standard_error),
                    opt(r.rank),
                    opt(ci.map(|i| i.lower)),
                    opt(ci.map(|i| i.upper)),
                ]);
            }
        }
        if !rows.is_empty() {
            section(
                &mut w,
                "indicators",
                strings([
                    "key",
                    "label",
                    "subset_id",
                    "value",
                    "standard_error",
                    "rank",
                    "ci_lower",
                    "ci_upper",
                ]),
                rows,
            );
        }
        let baselines: Vec<Vec<String>> = report
            .indicators
            .iter()
            .filter_map(|c| c.baseline.map(|b| vec![c.key.clone(), c.label.clone(), b.to_string()]))
            .collect();
        if !baselines.is_empty() {
            section(&mut w, "baselines", strings(["key", "label", "value"]), baselines);
        }

        let t = &report.tests;
        let with_outcome = |lead: Vec<&str>| {
            let mut h: Vec<String> = lead.iter().map(|s| s.to_string()).collect();
            h.extend(OUTCOME_HEADER.iter().map(|s| s.to_string()));
            h
        };
        if !t.kruskal.is_empty() {
            section(
                &mut w,
                "kruskal_wallis",
                with_outcome(vec!["data"]),
                t.kruskal
                    .iter()
                    .map(|g| std::iter::once(g.data.clone()).chain(outcome_row(&g.outcome)).collect())
                    .collect(),
            );
        }
        if !t.cramers_v.is_empty() {
            section(
                &mut w,
                "cramers_v",
                strings(["data", "value", "note"]),
                t.cramers_v
                    .iter()
                    .map(|e| vec![e.data.clone(), opt(e.cramers_v), e.note.clone().unwrap_or_default()])
                    .collect(),
            );
        }
        for (name, tests) in [("wilcoxon", &t.wilcoxon), ("chi_square", &t.chi_square)] {
            if !tests.is_empty() {
                section(
                    &mut w,
                    name,
                    with_outcome(vec!["subset_id"]),
                    tests
                        .iter()
                        .map(|s| {
                            std::iter::once(s.subset_id.clone())
                                .chain(outcome_row(&s.outcome))
                                .collect()
                        })
                        .collect(),
                );
            }
        }
        for (name, sections) in [("dunn", &t.dunn), ("mann_whitney", &t.mwu)] {
            if sections.is_empty() {
                continue;
            }
            let mut rows = Vec::new();
            for s in sections {
                if let Some(reason) = &s.skipped {
                    rows.push(vec![
                        s.data.clone(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        reason.clone(),
                    ]);
                }
                for c in &s.comparisons {
                    rows.push(vec![
                        s.data.clone(),
                        c.subset_a.clone(),
                        c.subset_b.clone(),
                        c.z_statistic.to_string(),
                        c.p_value.to_string(),
                        c.adjusted_alpha.to_string(),
                        c.significant.to_string(),
                        opt(c.confidence_interval.map(|i| i.lower)),
                        opt(c.confidence_interval.map(|i| i.upper)),
                        String::new(),
                    ]);
                }
            }
            section(
                &mut w,
                name,
                strings([
                    "data",
                    "subset_a",
                    "subset_b",
                    "z",
                    "p_value",
                    "adjusted_alpha",
                    "significant",
                    "ci_lower",
                    "ci_upper",
                    "skipped",
                ]),
                rows,
            );
        }
        if !report.quartiles.is_empty() {
            section(
                &mut w,
                "percentile_quartiles",
                strings(["subset_id", "min", "q1", "median", "q3", "max"]),
                report
                    .quartiles
                    .iter()
                    .map(|q| {
                        vec![
                            q.subset_id.clone(),
                            q.min.to_string(),
                            q.q1.to_string(),
                            q.median.to_string(),
                            q.q3.to_string(),
                            q.max.to_string(),
                        ]
                    })
                    .collect(),
            );
        }
        if !report.notes.is_empty() {
            section(
                &mut w,
                "notes",
                strings(["note"]),
                report.notes.iter().map(|n| vec![n.clone()]).collect(),
            );
        }
        w.flush().expect("in-memory write");
    }
    String::from_utf8(buf).expect("utf-8 csv")
}
