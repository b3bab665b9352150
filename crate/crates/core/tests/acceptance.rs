//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Runs criteria 1–9 in sequence followed by the runtime criterion, which is
//! measured over that same run. Numeric arguments select single criteria, e.g.
//! `cargo test -p mopsym-core --test acceptance -- 3 7`.

use std::process::ExitCode;

use mopsym_core::suite::{run_all, run_criterion, CriterionOutcome, DEFAULT_SEED};

fn main() -> ExitCode {
    let selected: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let outcomes: Vec<CriterionOutcome> = if selected.is_empty() {
        run_all(DEFAULT_SEED)
    } else {
        selected.iter().map(|&id| run_criterion(id, DEFAULT_SEED).unwrap_or_else(|e| panic!("criterion {id}: {e}"))).collect()
    };
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
