use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use radokit::expr::{
    canonical_combination, combinations_equal, parse_combination, parse_equation, UltraExpr,
};
use radokit::ueq::{reduce, u_equiv};

fn combination() -> impl Strategy<Value = UltraExpr> {
    prop::collection::vec(0u64..5, 0..8).prop_map(|v| UltraExpr::from_u64(&v))
}

#[test]
fn chain_from_three_term_progressions() {
    let chain = ["2U (+) 0U (+) U", "2U (+) U (+) U", "2U (+) 2U (+) U", "2U (+) U"];
    let parsed: Vec<UltraExpr> = chain.iter().map(|t| parse_combination(t).unwrap()).collect();
    for a in &parsed {
        for b in &parsed {
            assert!(combinations_equal(a, b));
        }
    }
    assert_eq!(canonical_combination(&parsed[0]).to_string(), "2U (+) U");
}

#[test]
fn witness_combination_parses() {
    let e = parse_combination("60U (+) 48U (+) 60U (+) 80U").unwrap();
    assert_eq!(canonical_combination(&e), e);
    let p = parse_equation("3x1+x2+x3-x4-4x5=0").unwrap();
    assert_eq!(p.eq.to_string(), "3x1+x2+x3-x4-4x5=0");
}

#[test]
fn huge_coefficients() {
    let text = "340282366920938463463374607431768211457U (+) U";
    let e = parse_combination(text).unwrap();
    assert_eq!(e.coeffs()[0], "340282366920938463463374607431768211457".parse::<BigUint>().unwrap());
    assert_eq!(e.to_string(), text);
}

proptest! {
    #[test]
    fn print_parse_round_trip(e in combination()) {
        let canon = canonical_combination(&e);
        let back = parse_combination(&canon.to_string()).unwrap();
        if canon.coeffs().is_empty() {
            // "0U" reads back as ⟨0⟩, which canonicalizes to the empty combination
            prop_assert_eq!(canonical_combination(&back), canon);
        } else {
            prop_assert_eq!(back, canon);
        }
        let raw = parse_combination(&e.to_string()).unwrap();
        prop_assert!(combinations_equal(&raw, &e));
    }

    #[test]
    fn agrees_with_string_equivalence(a in combination(), b in combination()) {
        prop_assert_eq!(combinations_equal(&a, &b), u_equiv(&a.to_int_string(), &b.to_int_string()));
        prop_assert_eq!(combinations_equal(&a, &b), combinations_equal(&b, &a));
        prop_assert!(combinations_equal(&a, &canonical_combination(&a)));
    }

    #[test]
    fn pseudo_sum_respects_equality(a in combination(), b in combination()) {
        let a2 = canonical_combination(&a);
        let b2 = canonical_combination(&b);
        prop_assert!(combinations_equal(&a.pseudo_sum(&b), &a2.pseudo_sum(&b2)));
    }

    #[test]
    fn scaling_commutes_with_canonical_form(v in prop::collection::vec(0i64..6, 0..10), h in 1i64..7) {
        let s = radokit::IntString::from(&v[..]);
        let h = BigInt::from(h);
        let lhs = reduce(&s.scale(&h)).into_int_string();
        let rhs = reduce(&s).into_int_string().scale(&h);
        prop_assert_eq!(lhs, rhs);
    }
}
