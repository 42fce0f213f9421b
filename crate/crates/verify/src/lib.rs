//! Runs the acceptance criteria at their stated truncations and prints one
//! line per criterion. Kept in its own package so that cargo runs it after
//! every other test binary of the workspace.

use k3e::suites::{self, Level, Limits, Outcome};
use std::time::Instant;

/// Runs every criterion, prints the report and returns the outcomes.
pub fn run_and_report() -> Vec<Outcome> {
    let lim = Limits::for_level(Level::Acceptance);
    let ids: Vec<usize> = suites::CRITERIA.iter().map(|c| c.id).collect();
    let start = Instant::now();
    let outcomes = suites::run(&lim, &ids, suites::thread_count(), |_| {});
    println!("\nrunning {} acceptance criteria", outcomes.len());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "\nacceptance result: {}. {} passed; {} failed; finished in {:.1} s\n",
        if failed == 0 { "ok" } else { "FAILED" },
        outcomes.len() - failed,
        failed,
        start.elapsed().as_secs_f64()
    );
    outcomes
}
