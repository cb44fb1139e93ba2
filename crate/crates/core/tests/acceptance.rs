//! Runs every acceptance criterion at the fixed seed and prints one line each.
//! Uses a plain `main` so the table is printed even when everything passes.

use atgraph::validate::{run_criterion, ACCEPTANCE_SEED, NUM_CRITERIA};

fn main() {
    let seed = ACCEPTANCE_SEED;
    println!("acceptance suite, seed {seed}");
    let mut failed = Vec::new();
    for index in 1..=NUM_CRITERIA {
        match run_criterion(index, seed) {
            Ok(outcome) => {
                println!("{}", outcome.line());
                if !outcome.report.passed {
                    for line in outcome.report.summary_lines() {
                        println!("    {line}");
                    }
                    failed.push(index);
                }
            }
            Err(e) => {
                println!("criterion {index:2} ERROR {e}");
                failed.push(index);
            }
        }
    }
    if failed.is_empty() {
        println!("all {NUM_CRITERIA} criteria passed");
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
