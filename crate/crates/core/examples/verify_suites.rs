//! Run the built-in verification suites and print the report.

use nhscatter::verify::{render_report, run_verify, VerifyConfig};

fn main() -> nhscatter::Result<()> {
    let reports = run_verify(&VerifyConfig::default())?;
    print!("{}", render_report(&reports));
    std::process::exit(if reports.iter().all(|r| r.passed()) {
        0
    } else {
        1
    });
}
