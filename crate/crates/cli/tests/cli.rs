use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn pimpact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pimpact")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn counts_input_text_report() {
    let o = pimpact(&["--counts", &fixture("seven_subsets_counts.csv")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("1       2.83(±0.38) [1]  1.83(±0.25) [5]"), "{text}");
    assert!(text.contains("pairwise alpha: 0.0023"));
    assert!(text.contains("Dunn post-hoc (classes)"));
}

#[test]
fn synthetic_corpus_json_matches_golden() {
    let golden = std::fs::read_to_string(fixture("synthetic/report.json")).unwrap();
    let args = [
        "--papers",
        &fixture("synthetic/papers.csv"),
        "--refs",
        &fixture("synthetic/refs.csv"),
        "--format",
        "json",
    ];
    let first = pimpact(&args);
    let second = pimpact(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first), golden);
}

#[test]
fn csv_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = pimpact(&[
        "--counts",
        &fixture("seven_subsets_counts.csv"),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(out).unwrap();
    for section in ["# metadata", "# contingency", "# indicators", "# chi_square", "# dunn"] {
        assert!(csv.contains(section), "missing {section}");
    }
}

#[test]
fn test_selection_and_forced_posthoc() {
    let o = pimpact(&[
        "--counts",
        &fixture("seven_subsets_counts.csv"),
        "--tests",
        "chi2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tests"]["chi_square"].as_array().unwrap().len(), 7);
    assert!(v["tests"]["dunn"].as_array().unwrap().is_empty());

    // Three similar subsets: the gate stops pairwise tests unless forced.
    let dir = tempfile::tempdir().unwrap();
    let counts = dir.path().join("flat.csv");
    std::fs::write(
        &counts,
        "subset_id,<50,[50;75[,[75;90[,[90;95[,[95;99[,>=99\na,10,5,3,1,1,0\nb,11,5,2,1,1,0\nc,10,6,3,1,0,0\n",
    )
    .unwrap();
    let gated = pimpact(&["--counts", counts.to_str().unwrap(), "--format", "json"]);
    let forced = pimpact(&[
        "--counts",
        counts.to_str().unwrap(),
        "--format",
        "json",
        "--force-posthoc",
    ]);
    let pairs = |o: &Output| -> usize {
        let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        v["tests"]["dunn"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["comparisons"].as_array().unwrap().len())
            .sum()
    };
    assert_eq!(gated.status.code(), Some(0));
    assert_eq!(pairs(&gated), 0);
    assert_eq!(pairs(&forced), 3);
}

#[test]
fn custom_scheme_file() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = dir.path().join("five.toml");
    std::fs::write(
        &scheme,
        "name = \"five\"\n\n[[classes]]\nlower_bound = 0\nweight = 1\nexpected_proportion = 0.5\n\n\
         [[classes]]\nlower_bound = 50\nweight = 2\nexpected_proportion = 0.25\n\n\
         [[classes]]\nlower_bound = 75\nweight = 3\nexpected_proportion = 0.15\n\n\
         [[classes]]\nlower_bound = 90\nweight = 4\nexpected_proportion = 0.05\n\n\
         [[classes]]\nlower_bound = 95\nweight = 5\nexpected_proportion = 0.05\n",
    )
    .unwrap();
    let o = pimpact(&[
        "--papers",
        &fixture("synthetic/papers.csv"),
        "--refs",
        &fixture("synthetic/refs.csv"),
        "--scheme",
        scheme.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("scheme: five (5 classes)"));
}

#[test]
fn bad_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let papers = dir.path().join("papers.csv");
    std::fs::write(
        &papers,
        "paper_id,citations,reference_key,subset_ids\np1,12,J:A:2003,PI1\np2,-1,J:A:2003,PI1\n",
    )
    .unwrap();
    let refs = dir.path().join("refs.csv");
    std::fs::write(&refs, "reference_key,counts\nJ:A:2003,0 1 12\n").unwrap();
    let o = pimpact(&["--papers", papers.to_str().unwrap(), "--refs", refs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");

    assert_eq!(pimpact(&["--counts", "/nonexistent/counts.csv"]).status.code(), Some(1));
    assert_eq!(
        pimpact(&["--counts", &fixture("seven_subsets_counts.csv"), "--format", "xml"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pimpact(&["--counts", &fixture("seven_subsets_counts.csv"), "--tests", "anova"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pimpact(&["--counts", &fixture("seven_subsets_counts.csv"), "--alpha", "1.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(pimpact(&[]).status.code(), Some(1));
    assert_eq!(pimpact(&["--help"]).status.code(), Some(0));
}

#[test]
fn all_tied_signed_rank_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let papers = dir.path().join("papers.csv");
    std::fs::write(
        &papers,
        "paper_id,citations,reference_key,subset_ids,percentile_class\n\
         p1,5,J,A,50\np2,6,J,A,50\np3,7,J,B,50\np4,8,J,B,50\n",
    )
    .unwrap();
    let o = pimpact(&["--papers", papers.to_str().unwrap(), "--tests", "wilcoxon"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    // With another usable test requested the run succeeds.
    let o = pimpact(&["--papers", papers.to_str().unwrap(), "--tests", "wilcoxon,chi2"]);
    assert_eq!(o.status.code(), Some(0));
}
