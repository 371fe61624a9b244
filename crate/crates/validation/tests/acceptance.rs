use std::process::ExitCode;
use std::time::Instant;

use longwave_validation::Report;

fn main() -> ExitCode {
    let mut reports: Vec<Report> = Vec::new();
    for check in longwave_validation::all() {
        let start = Instant::now();
        let report = check();
        print!("{report}");
        println!("    ({:.1} s)", start.elapsed().as_secs_f64());
        reports.push(report);
    }
    println!("\nsummary:");
    for r in &reports {
        println!("  {:>2} {} {}", r.id, r.verdict(), r.title);
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
