mod common;

use common::hypothesis_cases::CASES;

#[test]
fn boundary_cases_match_hand_evaluation() {
    assert!(CASES.len() >= 20);
    let wrong: Vec<String> = CASES
        .iter()
        .filter(|c| c.theorem.admits(&c.point) != c.admissible)
        .map(|c| format!("{} ({}): violations {:?}", c.name, c.theorem, c.theorem.violations(&c.point)))
        .collect();
    assert!(wrong.is_empty(), "{wrong:#?}");
}

#[test]
fn rejections_name_an_inequality() {
    for c in CASES.iter().filter(|c| !c.admissible) {
        let err = c.theorem.check(&c.point).unwrap_err().to_string();
        assert!(err.contains("violated"), "{}: {err}", c.name);
    }
}
