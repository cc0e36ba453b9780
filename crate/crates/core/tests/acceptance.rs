//! Acceptance criteria 1–10 over the bundled corpus, one line each.

use std::process::ExitCode;
use std::time::Instant;

use serrekb::corpus::bundled;
use serrekb::report::Status;
use serrekb::suite::{criterion_status, run_suite, SuiteConfig, CRITERIA};

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = match bundled() {
        Ok(c) => c,
        Err(e) => {
            println!("corpus failed to load: {e}");
            return ExitCode::FAILURE;
        }
    };
    let report = run_suite(&corpus, &SuiteConfig::default());
    let mut all = true;
    for (k, label) in CRITERIA {
        let status = criterion_status(&report, k);
        let prefix = format!("c{k:02}_");
        let checks: Vec<_> = report.checks.iter().filter(|c| c.name.starts_with(&prefix)).collect();
        let instances: u64 = checks.iter().filter_map(|c| c.witness["instances"].as_u64()).sum();
        let word = match status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        println!("criterion {k:>2} {label:<26} {word}  ({} algebras, {instances} instances)", checks.len());
        if status != Status::Pass {
            all = false;
            for c in checks.iter().filter(|c| c.status == Status::Fail) {
                println!("    {}: {}", c.name, c.witness);
            }
        }
    }
    println!("elapsed {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
