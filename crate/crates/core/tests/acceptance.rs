//! Runs all ten acceptance criteria at full scale, one line per criterion.
//!
//! `cargo test -p esz-core --test acceptance -- --nocapture` shows the lines.

use esz_core::acceptance::{run_criterion, Scale};

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for id in 1..=10u8 {
        let report = run_criterion(id, Scale::Full);
        println!("{}", report.line());
        if !report.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
