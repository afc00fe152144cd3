//! Normal forms and u-equivalence of integer strings and polynomials.
//!
//!     cargo run --example canonical_forms

use radokit::ueq::{poly_to_string, reduce, u_equiv, u_equiv_poly, IntString, Polynomial};

fn main() {
    let strings: [&[i64]; 5] = [
        &[3, 0, 0, -4, 1, 1],
        &[0, 3, -4, -4, 1],
        &[2, 2, 0, 0, 7, 7, 3],
        &[2, 0, 2],
        &[0],
    ];
    for s in strings {
        let s = IntString::from(s);
        println!("{s:<20} -> {}", reduce(&s));
    }

    let a = IntString::from([1, 2]);
    let b = IntString::from([2, 1]);
    println!("\n{a} ~ {b}: {}", u_equiv(&a, &b));

    let pairs = [
        (Polynomial::from_i64(&[3, 0, 0, -4, 1, 1]), Polynomial::from_i64(&[0, 3, -4, -4, 1])),
        (Polynomial::from_i64(&[2, 2, 0, 0, 7, 7, 3]), Polynomial::from_i64(&[2, 7, 3])),
    ];
    for (p, q) in &pairs {
        println!(
            "{p}  ~  {q}: {}   (coefficients {} and {})",
            u_equiv_poly(p, q),
            poly_to_string(p),
            poly_to_string(q)
        );
    }
}
