//! Solutions inside a finite set, mapped back through the witness sort.
//!
//!     cargo run --example solutions

use std::collections::BTreeSet;

use radokit::expr::parse_equation;
use radokit::search::solutions_in_set;
use radokit::witness::build_witness;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let parsed = parse_equation("-4a + b + 3c - d + e = 0")?;
    let w = build_witness(&parsed.eq)?;
    println!("original  {}", parsed.eq);
    println!("sorted    {}  (permutation {:?})", w.sorted_equation(), w.permutation());

    let set: BTreeSet<u64> = (1..=7).collect();
    for sol in solutions_in_set(w.sorted_equation(), &set, true, 5)? {
        let orig = w.to_original_order(sol.values());
        let named: Vec<String> = parsed
            .variable_names
            .iter()
            .zip(&orig)
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        println!("{:?} -> {}  (check: {})", sol.values(), named.join(" "), parsed.eq.evaluate(&orig));
    }
    Ok(())
}
