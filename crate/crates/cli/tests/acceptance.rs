//! The acceptance gate: every shipped guarantee runs here, one line per
//! criterion. `cargo test -p mol-cli --test acceptance -- --nocapture`
//! prints the full table.

use mol_cli::acceptance::{run, CRITERIA};

#[test]
fn acceptance_suite() {
    let outcomes = run(None);
    assert_eq!(outcomes.len(), CRITERIA.len(), "every criterion must run");

    let mut failures = Vec::new();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} {} ({} ms) — {}", o.name, o.millis, o.detail);
        if !o.passed {
            failures.push(format!("{}: {}", o.name, o.detail));
        }
    }
    assert!(
        failures.is_empty(),
        "acceptance criteria failed:\n{}",
        failures.join("\n")
    );
}

#[test]
fn filter_selects_subset() {
    let outcomes = run(Some("gv"));
    assert_eq!(outcomes.len(), 1);
    assert_eq!(outcomes[0].name, "gv-lengths");
    assert!(outcomes[0].passed, "{}", outcomes[0].detail);
}
