//! Acceptance battery: runs every shipped criterion serially and prints one
//! verdict line per criterion. Built without the default test harness so the
//! lines stream as they finish and the criteria never compete for the thread
//! pool.

use std::process::exit;

fn main() {
    let mut failures = 0usize;
    for &(index, _) in wfx::suite::CRITERIA.iter() {
        match wfx::suite::criterion(index) {
            Ok(outcome) => {
                println!("{}", outcome.line());
                if !outcome.pass {
                    failures += 1;
                }
            }
            Err(e) => {
                println!("ACCEPTANCE {index}: FAIL — did not run ({e})");
                failures += 1;
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures} criterion(s) failed");
        exit(1);
    }
    println!("acceptance: all {} criteria passed", wfx::suite::CRITERIA.len());
}
