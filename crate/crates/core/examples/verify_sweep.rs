//! The full consistency sweep run by `twophoton verify`.

use twophoton::cli::verify::run_checks;
use twophoton::cli::Report;

fn main() {
    let quick = std::env::args().any(|a| a == "--quick");
    let report = Report::Verify(run_checks(quick, 0.0));
    print!("{}", report.to_table().unwrap());
}
