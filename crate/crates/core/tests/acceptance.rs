//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any
//! criterion fails.

use std::process::ExitCode;

use kirchhoff_lab::verify::run_check;

fn main() -> ExitCode {
    println!("acceptance suite");
    let mut failed = Vec::new();
    for id in 1..=9 {
        let outcome = run_check(id);
        println!("{} ({:.1} s)", outcome.line(), outcome.seconds);
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: 9/9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {}/9 criteria passed; failed: {failed:?}",
            9 - failed.len()
        );
        ExitCode::FAILURE
    }
}
