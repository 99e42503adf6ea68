use std::time::Instant;

use oh_verify::suite::DEFAULT_SUITE;
use oh_verify::{exit_code, run_specs, Status, Suite};

#[test]
fn default_suite_passes_within_budget() {
    let started = Instant::now();
    let specs = Suite::parse(DEFAULT_SUITE).unwrap().expand(None);
    let results = run_specs(&specs);
    let failures: Vec<String> = results
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| format!("{} {} {} residual={:e}", r.id, r.group, r.young, r.residual))
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
    assert_eq!(exit_code(&results), 0);
    assert!(results.iter().any(|r| r.status == Status::Pass));
    assert!(started.elapsed().as_secs() < 120, "{:?}", started.elapsed());
}
