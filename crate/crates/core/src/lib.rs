//! Finitary tools around partition regularity of linear equations.
//!
//! * [`ueq`]: u-equivalence of integer strings and polynomials, decided by
//!   normal forms, plus a brute-force closure oracle.
//! * [`witness`]: witness coefficients `a₀ … a_{k−2}` for sum-zero equations
//!   and the polynomial family that certifies them.
//! * [`expr`]: parsers for equations, string literals and `aU (+) bU`
//!   combinations; equality of idempotent-ultrafilter combinations.
//! * [`search`]: monochromatic solutions, minimal forcing `N` by
//!   backtracking, Milliken–Taylor and finite sums.
//! * [`cli`]: the `radokit` command line, batch mode and result cache.

pub mod cli;
pub mod expr;
mod json;
pub mod search;
pub mod ueq;
pub mod witness;

pub use expr::{canonical_combination, combinations_equal, parse_combination, parse_equation, UltraExpr};
pub use search::{find_monochromatic, fs, min_forcing_n, mt_sums, solutions_in_set, Coloring, MTSpec, SearchConfig};
pub use ueq::{reduce, u_equiv, u_equiv_poly, CanonicalString, IntString, Polynomial};
pub use witness::{build_family, build_witness, check_system, verify_family, EquationCoeffs};
