//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so every line reaches stdout.

use c4lab::suite::{run_check, Mode, CHECKS};

fn main() {
    let mut failed = Vec::new();
    println!("acceptance: {} criteria", CHECKS.len());
    for (id, _) in CHECKS {
        let r = run_check(id, Mode::Quick).expect("known criterion");
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CHECKS.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
