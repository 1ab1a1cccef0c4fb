use std::process::ExitCode;

use clap::Parser;
use gralab::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match gralab::run(&cli) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            for c in &report.checks {
                println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
