//! Minimal N such that every r-coloring of {1..N} has a monochromatic
//! solution, by backtracking.
//!
//!     cargo run --release --example forcing_numbers

use std::time::Instant;

use radokit::expr::parse_equation;
use radokit::search::{min_forcing_n, Certificate, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("x+y-z=0", 2, false, 20),
        ("x+y-z=0", 3, false, 20),
        ("x+y-z=0", 2, true, 20),
        ("x+y-2z=0", 2, true, 20),
        ("x+y-2z=0", 3, true, 40),
        ("3x1+x2+x3-x4-4x5=0", 2, true, 40),
        ("x+y-3z=0", 2, false, 30),
    ];
    let config = SearchConfig::default();
    println!("{:<22} {:>2} {:>8} {:>6} {:>12} {:>10}", "equation", "r", "distinct", "N", "nodes", "time");
    for (text, r, distinct, n_max) in cases {
        let eq = parse_equation(text)?.eq;
        let start = Instant::now();
        let report = min_forcing_n(&eq, r, distinct, n_max, &config)?;
        let n = if report.outcome.forced {
            report.outcome.n.to_string()
        } else {
            format!(">{}", report.outcome.n)
        };
        println!(
            "{text:<22} {r:>2} {distinct:>8} {n:>6} {:>12} {:>10.2?}",
            report.outcome.nodes,
            start.elapsed()
        );
        if let Certificate::Counterexample(col) = &report.outcome.certificate {
            println!("    coloring without solutions: {:?}", col.colors());
        }
    }
    Ok(())
}
