//! Runs the acceptance matrix with the minimum sample sizes and prints the summary table.

use dqp::suite::{render, run, SuiteConfig};

fn main() {
    let cfg = SuiteConfig { quick: true, ..SuiteConfig::default() };
    let outcomes = run(&cfg).expect("all rows selected");
    print!("{}", render(&outcomes, std::env::args().any(|a| a == "-v")));
}
