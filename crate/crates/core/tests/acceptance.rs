//! Runs every acceptance criterion and prints one line per criterion.
//! Pass criterion ids as arguments to run a subset.

use std::process::ExitCode;
use std::time::Instant;

use realforms::selftest::criterion;

fn main() -> ExitCode {
    let requested: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u32> = if requested.is_empty() { (1..=10).collect() } else { requested };
    let mut failed = 0;
    for id in ids {
        let start = Instant::now();
        let Some(result) = criterion(id) else {
            eprintln!("unknown criterion {id}");
            return ExitCode::from(2);
        };
        println!("{} [{:.1}s]", result.line(), start.elapsed().as_secs_f64());
        failed += usize::from(!result.passed);
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
