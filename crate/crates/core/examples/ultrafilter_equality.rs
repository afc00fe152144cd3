//! Deciding equality of combinations a0 U (+) a1 U (+) ... for an
//! idempotent ultrafilter U.
//!
//!     cargo run --example ultrafilter_equality

use radokit::expr::{canonical_combination, combinations_equal, parse_combination};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        ("2U (+) 0U (+) U", "2U (+) U"),
        ("2U (+) U (+) U", "2U (+) 2U (+) U"),
        ("U (+) 2U", "2U (+) U"),
        ("U (+) U (+) U", "U"),
        ("0U", "0U (+) 0U"),
    ];
    for (l, r) in pairs {
        let (a, b) = (parse_combination(l)?, parse_combination(r)?);
        println!(
            "{l:<18} = {r:<18} {:<5}  canonical: {} | {}",
            combinations_equal(&a, &b),
            canonical_combination(&a),
            canonical_combination(&b)
        );
    }

    match parse_combination("2U (+) 3V") {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nrejected: {e}"),
    }
    Ok(())
}
