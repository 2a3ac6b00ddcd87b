use conevac_core::{run_oracle_suite, ORACLE_NAMES};

#[test]
fn full_suite_passes_on_two_seeds() {
    for seed in [1u64, 20240611] {
        let reports = run_oracle_suite(&[], seed);
        assert_eq!(reports.len(), ORACLE_NAMES.len());
        for r in &reports {
            println!("seed {seed}: {}", r.line());
        }
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.name.clone()).collect();
        assert!(failed.is_empty(), "failed: {failed:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    let sel = vec!["cone-image-sum".to_string(), "scaling".to_string()];
    assert_eq!(run_oracle_suite(&sel, 7), run_oracle_suite(&sel, 7));
}
