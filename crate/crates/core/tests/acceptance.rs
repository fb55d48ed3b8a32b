use std::io::Write;

use dqp::suite::{self, SuiteConfig};

/// Runs the eight criteria once. The status lines go straight to stdout so they
/// appear in the test log even when the harness captures `println!`.
#[test]
fn acceptance_criteria() {
    let cfg = SuiteConfig { quick: true, ..SuiteConfig::default() };
    let outcomes = suite::run(&cfg).expect("all rows selected");
    assert_eq!(outcomes.iter().map(|o| o.criterion).collect::<Vec<_>>(), (1..=8).collect::<Vec<u8>>());
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        writeln!(out, "acceptance criterion {} {:<17} {verdict} ({} checks, {} failed)", o.criterion, o.name, o.checks, o.failures).unwrap();
        for l in o.lines.iter().filter(|l| l.starts_with("FAIL")) {
            writeln!(out, "    {l}").unwrap();
        }
    }
    drop(out);
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
