//! The full acceptance suite, one line per check.
//!
//! `area-ode` is expected to fail: the inner boundary of its test annulus
//! (polar radius 0.6) shrinks to a point at `ln sec 0.6 ~ 0.192`, before the
//! comparison time 0.3, after which the area no longer follows `mu_0 e^t`.
//! The residual while both boundaries exist is reported in the detail column.

use sphere_csf::verify::{run_check, CHECK_NAMES};

const EXPECTED_FAILURES: &[&str] = &["area-ode"];

fn main() {
    let mut failed = Vec::new();
    for name in CHECK_NAMES {
        let row = run_check(name);
        println!(
            "{} {:<22} measured={:.4e} tol={:.1e}  {}",
            if row.passed { "PASS" } else { "FAIL" },
            row.name,
            row.measured,
            row.tolerance,
            row.detail
        );
        if !row.passed {
            failed.push(row.name);
        }
    }
    println!("{} of {} criteria pass", CHECK_NAMES.len() - failed.len(), CHECK_NAMES.len());
    if failed != EXPECTED_FAILURES {
        eprintln!("unexpected failures: {failed:?}, expected {EXPECTED_FAILURES:?}");
        std::process::exit(1);
    }
}
