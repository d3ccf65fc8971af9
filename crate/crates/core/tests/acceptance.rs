//! The ten acceptance criteria, one pass/fail line each.

use std::io::Write;

use nearconvex::verify::{run_all, VerifyConfig};

#[test]
fn acceptance_criteria() {
    let outcomes = run_all(&VerifyConfig::default()).expect("acceptance harness failed to run");
    assert_eq!(outcomes.len(), 10);
    // Written to the process handle so the lines show without --nocapture.
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        writeln!(out, "{o}").unwrap();
    }
    out.flush().unwrap();
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
