//! The acceptance criteria. Prints one `[PASS]`/`[FAIL]` line per criterion
//! and exits non-zero if any fails. Numeric arguments select criteria by id.

use deligne_lab::suite::{run_criterion, ACCEPTANCE};
use std::process::ExitCode;

fn main() -> ExitCode {
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, _) in ACCEPTANCE {
        if !picked.is_empty() && !picked.contains(&id) {
            continue;
        }
        let r = run_criterion(id);
        println!("{}", r.line());
        ran += 1;
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
