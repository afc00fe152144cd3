//! Witness combinations for sum-zero linear equations.
//!
//! For `c₁x₁ + … + c_kx_k = 0` with `Σcᵢ = 0` and `k > 2`, [`build_witness`]
//! produces positive integers `a₀ … a_{k−2}` together with a family of `k`
//! mutually distinct polynomials, each u-equivalent to `Σ aᵢXⁱ`, whose
//! `c`-weighted sum vanishes. Any such family certifies that every set in the
//! ultrafilter `a₀U ⊕ … ⊕ a_{k−2}U` (for idempotent `U`) contains distinct
//! solutions of the equation.
//!
//! With the coefficients sorted so that `c₁ ≥ … ≥ c_k`, write
//! `Sⱼ = c₁ + … + cⱼ` and `Tⱼ = c_k + c_{k−1} + … + c_{k−j}`. Then
//!
//! ```text
//!   aᵢ = (S₁ · S₂ ⋯ S_{k−2−i}) · (−1)ⁱ · (T₀ · T₁ ⋯ T_{i−1})
//! ```
//!
//! with empty products equal to 1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ueq::{u_equiv, IntString, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("invalid equation: {0}")]
    InvalidEquation(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

/// Coefficients `c₁ … c_k` of `c₁x₁ + … + c_kx_k = 0`, all nonzero, `k ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquationCoeffs(Vec<BigInt>);

impl EquationCoeffs {
    pub fn new(c: Vec<BigInt>) -> Result<Self, WitnessError> {
        if c.len() < 2 {
            return Err(WitnessError::InvalidEquation(format!(
                "need at least 2 variables, got {}",
                c.len()
            )));
        }
        if let Some(i) = c.iter().position(Zero::is_zero) {
            return Err(WitnessError::InvalidEquation(format!(
                "coefficient {} is zero",
                i + 1
            )));
        }
        Ok(EquationCoeffs(c))
    }

    pub fn from_i64(c: &[i64]) -> Result<Self, WitnessError> {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    /// Value of `Σ cᵢ xᵢ`.
    pub fn evaluate<T: Into<BigInt> + Copy>(&self, x: &[T]) -> BigInt {
        self.0.iter().zip(x).map(|(c, &v)| c * v.into()).sum()
    }

    /// Stable sort into non-increasing order. Returns the sorted equation and
    /// the permutation `p` with `sorted[i] = original[p[i]]`.
    pub fn sorted(&self) -> (EquationCoeffs, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.0.len()).collect();
        perm.sort_by(|&i, &j| self.0[j].cmp(&self.0[i]));
        let sorted = perm.iter().map(|&i| self.0[i].clone()).collect();
        (EquationCoeffs(sorted), perm)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for EquationCoeffs {
    /// Renders as `3x1+x2-4x3=0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "x{}", i + 1)?;
        }
        f.write_str("=0")
    }
}

impl Serialize for EquationCoeffs {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        crate::json::big_vec::serialize(&self.0, serializer)
    }
}

/// The witness coefficients `a₀ … a_{k−2}`, all ≥ 1, relative to the sorted
/// equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCombination {
    a: Vec<BigInt>,
    sorted_c: EquationCoeffs,
    permutation: Vec<usize>,
}

impl WitnessCombination {
    pub fn coefficients(&self) -> &[BigInt] {
        &self.a
    }

    pub fn sorted_equation(&self) -> &EquationCoeffs {
        &self.sorted_c
    }

    /// `sorted_equation()[i] = original[permutation()[i]]`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// The target string ⟨a₀, …, a_{k−2}⟩.
    pub fn as_string(&self) -> IntString {
        IntString::new(self.a.clone())
    }

    /// Maps a tuple indexed by the sorted equation's variables back to the
    /// original variable order.
    pub fn to_original_order<T: Clone>(&self, sorted_values: &[T]) -> Vec<T> {
        assert_eq!(sorted_values.len(), self.permutation.len());
        let mut out: Vec<Option<T>> = vec![None; sorted_values.len()];
        for (pos, &orig) in self.permutation.iter().enumerate() {
            out[orig] = Some(sorted_values[pos].clone());
        }
        out.into_iter().map(|v| v.expect("permutation is a bijection")).collect()
    }
}

pub fn build_witness(eq: &EquationCoeffs) -> Result<WitnessCombination, WitnessError> {
    let k = eq.k();
    if k < 3 {
        return Err(WitnessError::InvalidEquation(format!(
            "witness construction needs k > 2, got k = {k}"
        )));
    }
    if !eq.sum().is_zero() {
        return Err(WitnessError::InvalidEquation(format!(
            "coefficients sum to {}, not 0",
            eq.sum()
        )));
    }
    let (sorted, permutation) = eq.sorted();
    let c = sorted.coeffs();

    // prefix[j] = c₁ + … + cⱼ, suffix[j] = c_k + … + c_{k−j}
    let prefix: Vec<BigInt> = c
        .iter()
        .scan(BigInt::zero(), |acc, x| {
            *acc += x;
            Some(acc.clone())
        })
        .collect();
    let suffix: Vec<BigInt> = c
        .iter()
        .rev()
        .scan(BigInt::zero(), |acc, x| {
            *acc += x;
            Some(acc.clone())
        })
        .collect();

    let a: Vec<BigInt> = (0..=k - 2)
        .map(|i| {
            let b: BigInt = prefix[..k - 2 - i].iter().product();
            let b_prime: BigInt = suffix[..i].iter().product();
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            b * b_prime * sign
        })
        .collect();

    if let Some(i) = a.iter().position(|x| !x.is_positive()) {
        return Err(WitnessError::InvalidWitness(format!(
            "a_{i} = {} is not positive",
            a[i]
        )));
    }
    Ok(WitnessCombination {
        a,
        sorted_c: sorted,
        permutation,
    })
}

/// Checks the linear conditions under which `Σ cᵢPᵢ = 0` for the standard
/// family: `(Σc)·a₀ = 0`, `(Σc)·a_{k−2} = 0`, and for `1 ≤ j ≤ k−2`
///
/// ```text
///   (c₁ + … + c_{k−1−j})·aⱼ + (c_{k−j+1} + … + c_k)·a_{j−1} = 0
/// ```
///
/// Evaluated directly from the coefficients; no use of [`build_witness`].
pub fn check_system(eq: &EquationCoeffs, a: &[BigInt]) -> Result<bool, WitnessError> {
    let k = eq.k();
    if a.len() + 1 != k {
        return Err(WitnessError::DimensionMismatch {
            expected: k - 1,
            found: a.len(),
        });
    }
    let c = eq.coeffs();
    let total: BigInt = c.iter().sum();
    if !(&total * &a[0]).is_zero() || !(&total * &a[k - 2]).is_zero() {
        return Ok(false);
    }
    for j in 1..=k - 2 {
        let head: BigInt = c[..k - 1 - j].iter().sum();
        let tail: BigInt = c[k - j..].iter().sum();
        if !(head * &a[j] + tail * &a[j - 1]).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Polynomials `P₁ … P_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialFamily {
    members: Vec<Polynomial>,
}

impl PolynomialFamily {
    pub fn new(members: Vec<Polynomial>) -> Self {
        PolynomialFamily { members }
    }

    pub fn members(&self) -> &[Polynomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl Serialize for PolynomialFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<IntString> = self
            .members
            .iter()
            .map(crate::ueq::poly_to_string)
            .collect();
        strings.serialize(serializer)
    }
}

/// The family from the witness table, for `a = (a₀, …, a_{k−2})`:
///
/// ```text
///   P₁   = ⟨a₀, …, a_{k−2}, a_{k−2}⟩
///   P_m  = ⟨a₀, …, a_{k−1−m}, 0, a_{k−m}, …, a_{k−2}⟩     2 ≤ m ≤ k−1
///   P_k  = ⟨a₀, a₀, a₁, …, a_{k−2}⟩
/// ```
pub fn build_family(a: &[BigInt]) -> Result<PolynomialFamily, WitnessError> {
    if a.len() < 2 {
        return Err(WitnessError::InvalidWitness(format!(
            "need at least 2 coefficients, got {}",
            a.len()
        )));
    }
    if let Some(x) = a.iter().find(|x| !x.is_positive()) {
        return Err(WitnessError::InvalidWitness(format!(
            "coefficient {x} is not positive"
        )));
    }
    let k = a.len() + 1;
    let mut members = Vec::with_capacity(k);

    let mut first = a.to_vec();
    first.push(a[k - 2].clone());
    members.push(Polynomial::new(first));

    for m in 2..k {
        let mut p = a.to_vec();
        p.insert(k - m, BigInt::zero());
        members.push(Polynomial::new(p));
    }

    let mut last = Vec::with_capacity(k);
    last.push(a[0].clone());
    last.extend_from_slice(a);
    members.push(Polynomial::new(last));

    Ok(PolynomialFamily { members })
}

/// Independent checks on a candidate family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// `Σ cᵢ·Pᵢ` is the zero polynomial.
    pub sum_zero: bool,
    /// Every `Pᵢ` is u-equivalent to the target string.
    pub all_u_equivalent: bool,
    /// Members are pairwise distinct as coefficient vectors.
    pub pairwise_distinct: bool,
    pub witness: IntString,
    pub permutation: Vec<usize>,
    #[serde(skip)]
    pub distinct_required: bool,
}

impl VerificationReport {
    /// All checks pass; distinctness only counts when it was required.
    pub fn passed(&self) -> bool {
        self.sum_zero && self.all_u_equivalent && (!self.distinct_required || self.pairwise_distinct)
    }

    pub fn with_permutation(mut self, permutation: Vec<usize>) -> Self {
        self.permutation = permutation;
        self
    }
}

/// Verifies an arbitrary family against `eq` and `target`. The report's
/// permutation is the identity; use [`VerificationReport::with_permutation`]
/// when the equation was sorted by [`build_witness`].
pub fn verify_family(
    eq: &EquationCoeffs,
    target: &IntString,
    family: &PolynomialFamily,
    require_distinct: bool,
) -> Result<VerificationReport, WitnessError> {
    if family.len() != eq.k() {
        return Err(WitnessError::DimensionMismatch {
            expected: eq.k(),
            found: family.len(),
        });
    }
    let combo = eq
        .coeffs()
        .iter()
        .zip(family.members())
        .fold(Polynomial::zero(), |acc, (c, p)| &acc + &(c * p));
    let all_u_equivalent = family
        .members()
        .iter()
        .all(|p| u_equiv(&crate::ueq::poly_to_string(p), target));
    let m = family.members();
    let pairwise_distinct = (0..m.len()).all(|i| (i + 1..m.len()).all(|j| m[i] != m[j]));

    Ok(VerificationReport {
        sum_zero: combo.is_zero(),
        all_u_equivalent,
        pairwise_distinct,
        witness: target.clone(),
        permutation: (0..eq.k()).collect(),
        distinct_required: require_distinct,
    })
}

/// Witness, family and verification in one step.
pub fn witness_report(
    eq: &EquationCoeffs,
) -> Result<(WitnessCombination, PolynomialFamily, VerificationReport), WitnessError> {
    let w = build_witness(eq)?;
    let family = build_family(w.coefficients())?;
    let report = verify_family(w.sorted_equation(), &w.as_string(), &family, true)?
        .with_permutation(w.permutation().to_vec());
    Ok((w, family, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn eq(v: &[i64]) -> EquationCoeffs {
        EquationCoeffs::from_i64(v).unwrap()
    }

    #[test]
    fn worked_example() {
        let w = build_witness(&eq(&[3, 1, 1, -1, -4])).unwrap();
        assert_eq!(w.coefficients(), big(&[60, 48, 60, 80]).as_slice());
        assert_eq!(w.permutation(), &[0, 1, 2, 3, 4]);
        assert!(check_system(w.sorted_equation(), w.coefficients()).unwrap());
    }

    #[test]
    fn small_witnesses() {
        let w = build_witness(&eq(&[1, 1, -2])).unwrap();
        assert_eq!(w.coefficients(), big(&[1, 2]).as_slice());
        let w = build_witness(&eq(&[1, 1, -1, -1])).unwrap();
        assert_eq!(w.coefficients(), big(&[2, 1, 2]).as_slice());
    }

    #[test]
    fn unsorted_input_is_sorted_stably() {
        let e = eq(&[-2, 1, 1]);
        let w = build_witness(&e).unwrap();
        assert_eq!(w.sorted_equation().coeffs(), big(&[1, 1, -2]).as_slice());
        assert_eq!(w.permutation(), &[1, 2, 0]);
        // (1,3,2) solves x+y-2z=0; in the original order z comes first
        let orig = w.to_original_order(&[1u64, 3, 2]);
        assert_eq!(orig, vec![2, 1, 3]);
        assert!(e.evaluate(&orig).is_zero());
    }

    #[test]
    fn invalid_equations() {
        assert!(matches!(build_witness(&eq(&[1, 1, -1])), Err(WitnessError::InvalidEquation(_))));
        assert!(matches!(build_witness(&eq(&[1, -1])), Err(WitnessError::InvalidEquation(_))));
        assert!(EquationCoeffs::from_i64(&[1, 0, -1]).is_err());
        assert!(EquationCoeffs::from_i64(&[1]).is_err());
    }

    #[test]
    fn check_system_cases() {
        assert!(check_system(&eq(&[3, 1, 1, -1, -4]), &big(&[60, 48, 60, 80])).unwrap());
        assert!(check_system(&eq(&[1, 1, -2]), &big(&[1, 2])).unwrap());
        assert!(!check_system(&eq(&[1, 1, -2]), &big(&[1, 1])).unwrap());
        assert_eq!(
            check_system(&eq(&[1, 1, -2]), &big(&[1])),
            Err(WitnessError::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn family_table() {
        let f = build_family(&big(&[1, 2])).unwrap();
        let want: Vec<Polynomial> = [[1, 2, 2], [1, 0, 2], [1, 1, 2]]
            .iter()
            .map(|p| Polynomial::from_i64(p))
            .collect();
        assert_eq!(f.members(), want.as_slice());

        let f = build_family(&big(&[60, 48, 60, 80])).unwrap();
        assert_eq!(f.len(), 5);
        assert_eq!(f.members()[1], Polynomial::from_i64(&[60, 48, 60, 0, 80]));
        assert_eq!(f.members()[3], Polynomial::from_i64(&[60, 0, 48, 60, 80]));
        assert_eq!(f.members()[4], Polynomial::from_i64(&[60, 60, 48, 60, 80]));
        let target = IntString::new(big(&[60, 48, 60, 80]));
        for p in f.members() {
            assert!(u_equiv(&crate::ueq::poly_to_string(p), &target));
        }
        assert!(build_family(&big(&[1])).is_err());
        assert!(build_family(&big(&[1, 0])).is_err());
    }

    #[test]
    fn verify_families() {
        let (_, _, report) = witness_report(&eq(&[3, 1, 1, -1, -4])).unwrap();
        assert!(report.sum_zero && report.all_u_equivalent && report.pairwise_distinct);

        let e = eq(&[1, 1, -2]);
        let target = IntString::from([1, 2]);
        let family = PolynomialFamily::new(vec![
            Polynomial::from_i64(&[1, 2, 2]),
            Polynomial::from_i64(&[1, 0, 2]),
            Polynomial::from_i64(&[1, 1, 2]),
        ]);
        let r = verify_family(&e, &target, &family, true).unwrap();
        assert!(r.passed());

        let mut members = family.members().to_vec();
        members[0] = Polynomial::from_i64(&[1, 2]);
        let r = verify_family(&e, &target, &PolynomialFamily::new(members), true).unwrap();
        assert!(!r.sum_zero);
        assert!(r.all_u_equivalent);

        let short = PolynomialFamily::new(family.members()[..2].to_vec());
        assert!(matches!(
            verify_family(&e, &target, &short, true),
            Err(WitnessError::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn distinctness_only_counts_when_required() {
        // x - y = 0 with P₁ = P₂ = ⟨1⟩: sum vanishes, members coincide
        let e = eq(&[1, -1]);
        let p = Polynomial::from_i64(&[1]);
        let family = PolynomialFamily::new(vec![p.clone(), p]);
        let target = IntString::from([1]);
        assert!(!verify_family(&e, &target, &family, true).unwrap().passed());
        assert!(verify_family(&e, &target, &family, false).unwrap().passed());
    }

    #[test]
    fn report_json_schema() {
        let (_, _, report) = witness_report(&eq(&[1, 1, -2])).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "sum_zero": true,
                "all_u_equivalent": true,
                "pairwise_distinct": true,
                "witness": ["1", "2"],
                "permutation": [0, 1, 2]
            })
        );
    }

    #[test]
    fn equation_display() {
        assert_eq!(eq(&[3, 1, 1, -1, -4]).to_string(), "3x1+x2+x3-x4-4x5=0");
    }
}
