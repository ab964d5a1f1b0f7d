//! One line per acceptance criterion, then a single assertion over all of
//! them so every result is printed even when one fails.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use cops_core::acceptance::{run_criterion, CRITERIA};

#[test]
fn acceptance_criteria() {
    let reports: Vec<_> = CRITERIA.iter().map(|&(id, _)| run_criterion(id)).collect();
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<usize> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
