use percentile_impact_wasm::{evaluate_counts_table, score_paper, signed_rank};
use serde_json::Value;

const COUNTS: &str = include_str!("../../../fixtures/seven_subsets_counts.csv");

#[test]
fn scores_a_paper() {
    // 7 of the 10 reference counts lie strictly below 12.
    let v: Value = serde_json::from_str(&score_paper(12, "0 1 2 3, 4;5 6 12 20 31").unwrap()).unwrap();
    assert_eq!(v["strictly_fewer"], 7);
    assert_eq!(v["percentile_class"], 70);
    assert_eq!(v["rank"], 71);
    assert_eq!(v["scheme_class"], "[50;75[");
    assert_eq!(v["weight"], 2.0);
    assert_eq!(v["in_reference"], true);
}

#[test]
fn rejects_bad_reference_text() {
    assert!(score_paper(3, "").is_err());
    assert!(score_paper(3, "1 2 x").is_err());
    assert!(score_paper(3, "1 -2").is_err());
    assert!(score_paper(3, "1 2.5").is_err());
}

#[test]
fn evaluates_counts_in_all_formats() {
    let text = evaluate_counts_table(COUNTS, "text").unwrap();
    assert!(text.contains("2.83(±0.38) [1]"));
    assert!(text.contains("random-attribution baseline R(6) = 1.91"));
    let json: Value = serde_json::from_str(&evaluate_counts_table(COUNTS, "json").unwrap()).unwrap();
    assert_eq!(json["metadata"]["memberships"], 248);
    assert!(evaluate_counts_table(COUNTS, "csv").unwrap().contains("# indicators"));
    assert!(evaluate_counts_table(COUNTS, "xml").is_err());
    assert!(evaluate_counts_table("subset_id,a\n1,2\n", "text").is_err());
}

#[test]
fn runs_signed_rank() {
    let v: Value = serde_json::from_str(&signed_rank("1 2 3 4 5 6", 0.0, "greater").unwrap()).unwrap();
    assert_eq!(v["method"], "exact");
    assert_eq!(v["statistic"], 21.0);
    assert!((v["p_value"].as_f64().unwrap() - 1.0 / 64.0).abs() < 1e-12);
    assert!(signed_rank("1 2", 0.0, "sideways").is_err());
}
