use qei_cli::selftest;

#[test]
fn acceptance_criteria() {
    let results = selftest::run_all(0);
    assert_eq!(results.len(), 12);
    let mut failed = Vec::new();
    for r in &results {
        println!(
            "criterion {:2} [{}] {}: {}",
            r.index,
            if r.passed { "pass" } else { "FAIL" },
            r.name,
            r.detail
        );
        if !r.passed {
            failed.push(r.index);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
