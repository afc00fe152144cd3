//! Witness coefficients and the certifying polynomial family for sum-zero
//! equations.
//!
//!     cargo run --example rado_witness [EQUATION]

use radokit::expr::parse_equation;
use radokit::witness::{build_family, build_witness, check_system, verify_family};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "3x1+x2+x3-x4-4x5=0".into());
    let parsed = parse_equation(&text)?;
    let w = build_witness(&parsed.eq)?;

    println!("equation      {}", parsed.eq);
    println!("sorted        {}", w.sorted_equation());
    println!("permutation   {:?}", w.permutation());
    println!("witness       {}", w.as_string());
    println!("system holds  {}", check_system(w.sorted_equation(), w.coefficients())?);

    let family = build_family(w.coefficients())?;
    for (i, p) in family.members().iter().enumerate() {
        println!("P{:<2} = {p}", i + 1);
    }
    let report = verify_family(w.sorted_equation(), &w.as_string(), &family, true)?;
    println!(
        "sum zero: {}, all u-equivalent: {}, pairwise distinct: {}",
        report.sum_zero, report.all_u_equivalent, report.pairwise_distinct
    );

    let combination: Vec<String> = w.coefficients().iter().map(|a| format!("{a}U")).collect();
    println!("every set in {} contains distinct solutions", combination.join(" (+) "));
    Ok(())
}
