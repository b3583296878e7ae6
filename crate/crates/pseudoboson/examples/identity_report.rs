//! The identity check suites as a library call: the same report the
//! `pseudoboson check` command emits, including the fault-injection hook
//! that proves a broken operator turns the report red.
//!
//! ```bash
//! cargo run -p pseudoboson --example identity_report
//! ```

use pseudoboson::check::{run_check, Fault, Scope};
use pseudoboson::Prec;

fn main() {
    let prec = Prec::default();

    let report = run_check(Scope::All, None, 7, prec);
    println!("scope=all, no fault:");
    for line in &report.lines {
        println!("  {}", line.render());
    }
    println!("passed: {}\n", report.passed);

    // wire a sign error into the multiplication operator: the commutator
    // check catches it immediately
    let report = run_check(Scope::Distrib, Some(Fault::ApplyXSignFlip), 7, prec);
    println!("scope=distrib, apply-x sign fault injected:");
    for line in &report.lines {
        println!("  {}", line.render());
    }
    println!("passed: {}", report.passed);
}
