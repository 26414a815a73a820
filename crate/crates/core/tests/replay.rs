use std::collections::BTreeSet;

use mfq::catalog::{Catalog, DEFAULT_CATALOG_JSON};
use mfq::replay::{self, CheckStatus, ReplayOptions, Rule, Status, G3_CANDIDATES};

#[test]
fn g3_excludes_all_ten_candidates() {
    let catalog = Catalog::default_catalog();
    let report = replay::replay_g3(&catalog, ReplayOptions::default()).unwrap();
    assert_eq!(report.status, Status::Success, "{:?}", report.discrepancies);
    assert_eq!(report.exit_code(), 0);
    let names: BTreeSet<&str> = report.verdicts.iter().map(|v| v.name.as_str()).collect();
    assert_eq!(names, G3_CANDIDATES.iter().copied().collect());
    assert!(report.survivors.is_empty());
    let rule = |name: &str| report.verdicts.iter().find(|v| v.name == name).unwrap().rule.clone();
    assert_eq!(rule("U3(3)"), Rule::MissingOrder { orders: vec![9] });
    assert_eq!(rule("A9"), Rule::MissingOrder { orders: vec![8] });
    assert_eq!(rule("L2(49)"), Rule::MissingOrder { orders: vec![9] });
    let q8 = report.checks.iter().find(|c| c.name.contains("quaternion")).unwrap();
    assert_eq!(q8.status, CheckStatus::Note);
}

#[test]
fn g3_refuses_success_on_a_broken_candidate_set() {
    let mut text = DEFAULT_CATALOG_JSON.to_string();
    // Flip J2 to no PSL(2,7); the candidate set check must fail.
    let line = text.lines().find(|l| l.contains("\"name\": \"J2\"") || l.contains("\"name\":\"J2\"")).unwrap().to_string();
    let edited = line.replace("\"contains_psl27\": \"yes\"", "\"contains_psl27\": \"no\"").replace("\"contains_psl27\":\"yes\"", "\"contains_psl27\":\"no\"");
    assert_ne!(line, edited);
    text = text.replace(&line, &edited);
    let broken = Catalog::from_json(&text).unwrap();
    let report = replay::replay_g3(&broken, ReplayOptions::default()).unwrap();
    assert_eq!(report.exit_code(), 1);
    assert!(report.discrepancies.iter().any(|d| d.contains("candidate set")));
}

#[test]
fn frontier_reports_mismatch_as_discrepancy() {
    let catalog = Catalog::default_catalog();
    let report = replay::frontier_g3(&catalog, ReplayOptions { samples: 2000, ..ReplayOptions::default() }).unwrap();
    assert!(report.survivors.contains(&"3D4(2)".to_string()));
    assert!(report.survivors.contains(&"McL".to_string()));
    assert!(report.verdicts.iter().all(|v| v.name != "S6(3)" && v.name != "O7(3)" && v.name != "S6(2)"));
    let u317 = report.verdicts.iter().find(|v| v.name == "U3(17)").unwrap();
    assert_eq!(u317.rule, Rule::MissingOrder { orders: vec![14] });
    assert_eq!(report.exit_code(), 1);
    assert!(report.discrepancies.iter().any(|d| d.starts_with("U3(17)")));
}

#[test]
fn text_and_json_agree_on_survivors() {
    let catalog = Catalog::default_catalog();
    let report = replay::frontier_g3(&catalog, ReplayOptions { samples: 500, ..ReplayOptions::default() }).unwrap();
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let survivors: Vec<&str> = json["survivors"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let text = report.to_text();
    for s in survivors {
        assert!(text.contains(&format!("\n{s}\n")));
    }
    assert!(json["verdicts"][0]["order"].is_string());
}

#[test]
fn missing_catalog_coverage_is_an_input_error() {
    let text: String = DEFAULT_CATALOG_JSON.lines().filter(|l| !l.contains("\"M22\"")).collect::<Vec<_>>().join("\n");
    let partial = Catalog::from_json(&text).unwrap();
    assert!(replay::replay_g4(&partial, ReplayOptions::default()).is_err());
}
