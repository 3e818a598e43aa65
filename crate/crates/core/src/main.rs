use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use zgraded::geometry::catalog;
use zgraded::harness::{resolve_spacetime, run_suite, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(
    name = "zgraded",
    version,
    about = "Check suites for graded multi-form calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a named check suite on a chart and print a JSON report.
    Check {
        /// flat-bicomplex, operator-algebra, curtright, geometry, bianchi,
        /// susy, bundle or all.
        #[arg(required_unless_present = "list")]
        suite: Option<String>,
        /// Catalog chart name or path to a spacetime file.
        #[arg(long, required_unless_present = "list")]
        spacetime: Option<String>,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        /// Sample points for pointwise checks.
        #[arg(long, default_value_t = SuiteConfig::default().points)]
        points: usize,
        /// Tolerance for pointwise operator identities.
        #[arg(long, default_value_t = SuiteConfig::default().tol)]
        tol: f64,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// List suites and catalog charts.
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let Command::Check {
        suite,
        spacetime,
        seed,
        points,
        tol,
        json,
        list,
    } = Cli::parse().command;
    if list {
        println!("suites:");
        for s in Suite::EVERY {
            println!("  {s}");
        }
        println!("charts:");
        for c in catalog() {
            println!("  {} (dim {})", c.name(), c.dim());
        }
        return ExitCode::SUCCESS;
    }
    let (suite, spacetime) = (
        suite.expect("required by clap"),
        spacetime.expect("required by clap"),
    );
    let config = SuiteConfig {
        seed,
        points,
        tol,
        ..SuiteConfig::default()
    };
    let start = Instant::now();
    let result = suite.parse::<Suite>().and_then(|s| {
        let chart = resolve_spacetime(&spacetime)?;
        run_suite(s, &chart, &config)
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    println!("{text}");
    if let Some(path) = json {
        if let Err(e) = std::fs::write(&path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    eprint!("{}", report.summary());
    eprintln!("finished in {:.2}s", start.elapsed().as_secs_f64());
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
