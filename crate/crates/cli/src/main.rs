use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;

use percentile_impact::render::{render_report, Format};
use percentile_impact::report::{parse_tests, run_evaluation, EvaluationConfig, EvaluationOptions, InputSource};
use percentile_impact::scheme::load_scheme_file;

/// Percentile-rank citation impact evaluation.
///
/// Scores papers against reference sets (or takes precomputed classes or
/// class counts), computes R(i) and R(i,k) indicators and runs the
/// non-parametric test battery.
#[derive(Debug, Parser)]
#[command(name = "pimpact", version)]
struct Cli {
    /// Papers CSV: paper_id,citations,reference_key,subset_ids[,percentile_class]
    #[arg(long, value_name = "PATH", conflicts_with = "counts")]
    papers: Option<PathBuf>,

    /// Reference distributions CSV: reference_key,counts
    #[arg(long, value_name = "PATH", requires = "papers")]
    refs: Option<PathBuf>,

    /// Subset-by-class counts CSV: subset_id,<one column per class>
    #[arg(long, value_name = "PATH")]
    counts: Option<PathBuf>,

    /// Scheme file (TOML or JSON) or a built-in name (nsf6, r100)
    #[arg(long, value_name = "PATH|nsf6", default_value = "nsf6")]
    scheme: String,

    /// Family-wise alpha
    #[arg(long, value_name = "F", default_value_t = 0.05)]
    alpha: f64,

    /// Comma-separated subset of wilcoxon,chi2,kruskal,dunn,mwu
    #[arg(long, value_name = "LIST", default_value = "wilcoxon,chi2,kruskal,dunn,mwu")]
    tests: String,

    #[arg(long, value_name = "text|csv|json", default_value = "text")]
    format: String,

    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Run pairwise comparisons even when Kruskal-Wallis does not reject
    #[arg(long)]
    force_posthoc: bool,
}

enum Failure {
    Input(anyhow::Error),
    Degenerate(anyhow::Error),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let input = match (&cli.papers, &cli.counts) {
        (Some(papers), None) => InputSource::Papers {
            papers_path: papers.clone(),
            references_path: cli.refs.clone(),
        },
        (None, Some(counts)) => InputSource::Counts {
            counts_path: counts.clone(),
        },
        _ => {
            return Err(Failure::Input(anyhow::anyhow!(
                "give exactly one of --papers or --counts"
            )))
        }
    };
    let build = || -> anyhow::Result<(EvaluationConfig, Format)> {
        let scheme = load_scheme_file(&cli.scheme).context("loading scheme")?;
        let format: Format = cli.format.parse()?;
        let tests = parse_tests(&cli.tests)?;
        if !(cli.alpha > 0.0 && cli.alpha < 1.0) {
            bail!("--alpha must lie in (0, 1)");
        }
        let mut options = EvaluationOptions::new(scheme);
        options.family_alpha = cli.alpha;
        options.tests = tests;
        options.force_posthoc = cli.force_posthoc;
        Ok((EvaluationConfig { input, options }, format))
    };
    let (config, format) = build().map_err(Failure::Input)?;

    let report = run_evaluation(&config).map_err(|e| {
        if e.is_degenerate() {
            Failure::Degenerate(e.into())
        } else {
            Failure::Input(e.into())
        }
    })?;
    let text = render_report(&report, format);
    match &cli.out {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Input)?,
        None => print!("{text}"),
    }
    if report.requested_tests_degenerate() {
        return Err(Failure::Degenerate(anyhow::anyhow!(
            "no requested test produced a result (degenerate input)"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Degenerate(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
