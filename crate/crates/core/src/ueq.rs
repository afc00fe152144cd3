//! u-equivalence of integer strings.
//!
//! Two strings are u-equivalent when one can be turned into the other by
//! inserting or deleting zeros and by duplicating an entry or collapsing two
//! adjacent equal entries, anywhere inside the string. Orienting the rules
//! towards shorter strings gives a terminating, confluent reduction system
//!
//! ```text
//!   ⟨…, 0, …⟩     →  ⟨…, …⟩
//!   ⟨…, a, a, …⟩  →  ⟨…, a, …⟩
//! ```
//!
//! whose normal forms ([`CanonicalString`]) contain no zero and no two equal
//! neighbours. Equivalence is decided by comparing normal forms.
//!
//! For strings over the naturals, uniqueness of the normal form is a known
//! theorem. For strings with negative entries it is validated empirically
//! against the bounded [`closure_oracle`], which applies the generating rules
//! in both directions.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Deref, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A finite sequence of integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntString(Vec<BigInt>);

impl IntString {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntString(entries)
    }

    pub fn empty() -> Self {
        IntString(Vec::new())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    /// Concatenation `self ⌢ other`.
    pub fn concat(&self, other: &IntString) -> IntString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        IntString(v)
    }

    /// Multiplies every entry by `h`.
    pub fn scale(&self, h: &BigInt) -> IntString {
        IntString(self.0.iter().map(|a| a * h).collect())
    }

    /// Every string obtained by one application of a reduction rule.
    ///
    /// Maximal chains of these steps are what the confluence tests explore;
    /// [`reduce`] takes a shortcut to the same normal form.
    pub fn one_step_reducts(&self) -> Vec<IntString> {
        let e = &self.0;
        let mut out = Vec::new();
        for i in 0..e.len() {
            if e[i].is_zero() {
                out.push(IntString(remove_at(e, i)));
            }
            if i + 1 < e.len() && e[i] == e[i + 1] {
                out.push(IntString(remove_at(e, i + 1)));
            }
        }
        out
    }
}

fn remove_at(v: &[BigInt], i: usize) -> Vec<BigInt> {
    let mut w = Vec::with_capacity(v.len() - 1);
    w.extend_from_slice(&v[..i]);
    w.extend_from_slice(&v[i + 1..]);
    w
}

impl Deref for IntString {
    type Target = [BigInt];

    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl From<Vec<BigInt>> for IntString {
    fn from(v: Vec<BigInt>) -> Self {
        IntString(v)
    }
}

impl From<&[i64]> for IntString {
    fn from(v: &[i64]) -> Self {
        IntString(v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl<const N: usize> From<[i64; N]> for IntString {
    fn from(v: [i64; N]) -> Self {
        IntString::from(&v[..])
    }
}

impl FromIterator<BigInt> for IntString {
    fn from_iter<I: IntoIterator<Item = BigInt>>(iter: I) -> Self {
        IntString(iter.into_iter().collect())
    }
}

impl fmt::Display for IntString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.0)
    }
}

fn write_bracketed(f: &mut fmt::Formatter<'_>, v: &[BigInt]) -> fmt::Result {
    f.write_str("[")?;
    for (i, a) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str("]")
}

impl Serialize for IntString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        crate::json::big_vec::serialize(&self.0, serializer)
    }
}

impl<'de> Deserialize<'de> for IntString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        crate::json::big_vec::deserialize(deserializer).map(IntString)
    }
}

/// A string in normal form: no zero entry, no two adjacent equal entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalString(Vec<BigInt>);

impl CanonicalString {
    /// Checks the normal-form invariants.
    pub fn try_new(entries: Vec<BigInt>) -> Option<Self> {
        is_canonical(&entries).then_some(CanonicalString(entries))
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_int_string(self) -> IntString {
        IntString(self.0)
    }
}

pub fn is_canonical(entries: &[BigInt]) -> bool {
    entries.iter().all(|a| !a.is_zero()) && entries.windows(2).all(|w| w[0] != w[1])
}

impl Deref for CanonicalString {
    type Target = [BigInt];

    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl From<CanonicalString> for IntString {
    fn from(c: CanonicalString) -> Self {
        c.into_int_string()
    }
}

impl fmt::Display for CanonicalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.0)
    }
}

impl Serialize for CanonicalString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        crate::json::big_vec::serialize(&self.0, serializer)
    }
}

/// Normal form of `s`.
///
/// Deleting all zeros first and then collapsing runs reaches the same normal
/// form as any other order of rule applications.
pub fn reduce(s: &IntString) -> CanonicalString {
    let mut out: Vec<BigInt> = Vec::with_capacity(s.len());
    for a in s.iter().filter(|a| !a.is_zero()) {
        if out.last() != Some(a) {
            out.push(a.clone());
        }
    }
    CanonicalString(out)
}

pub fn u_equiv(s: &IntString, t: &IntString) -> bool {
    reduce(s) == reduce(t)
}

/// An integer polynomial, stored as ascending coefficients with trailing
/// zeros trimmed. The zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// The monomial `X^degree`.
    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = BigInt::one();
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

impl From<IntString> for Polynomial {
    fn from(s: IntString) -> Self {
        Polynomial::new(s.into_entries())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Polynomial::new(coeffs)
    }
}

impl Mul<&Polynomial> for &BigInt {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::new(rhs.coeffs.iter().map(|c| self * c).collect())
    }
}

impl fmt::Display for Polynomial {
    /// Descending-degree form, e.g. `3X^2+7X+2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &BigInt::zero();
            let mag = if negative { -c } else { c.clone() };
            if negative {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let unit = mag.is_one();
            if !unit || deg == 0 {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => f.write_str("X")?,
                d => write!(f, "X^{d}")?,
            }
        }
        Ok(())
    }
}

/// The ascending coefficient string ⟨a₀, …, aₙ⟩ of `p`.
pub fn poly_to_string(p: &Polynomial) -> IntString {
    IntString(p.coeffs.clone())
}

pub fn u_equiv_poly(p: &Polynomial, q: &Polynomial) -> bool {
    u_equiv(&poly_to_string(p), &poly_to_string(q))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("closure exceeded the state cap of {cap} strings")]
    StateCapExceeded { cap: usize },
    #[error("start string has length {len}, above max_len {max_len}")]
    StartTooLong { len: usize, max_len: usize },
    #[error("start string entry {0} is not in the value set")]
    ValueOutsideSet(BigInt),
}

/// Default state cap for [`closure_oracle`].
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 20;

/// Breadth-first closure of `s` under the generating rules applied in both
/// directions (insert/delete a zero, duplicate/collapse an entry) at any
/// position, keeping only strings of length ≤ `max_len` whose entries lie in
/// `value_set`.
///
/// This is a reference oracle: it never consults [`reduce`].
pub fn closure_oracle(
    s: &IntString,
    max_len: usize,
    value_set: &BTreeSet<BigInt>,
    cap: usize,
) -> Result<BTreeSet<IntString>, OracleError> {
    if s.len() > max_len {
        return Err(OracleError::StartTooLong { len: s.len(), max_len });
    }
    if let Some(bad) = s.iter().find(|a| !value_set.contains(*a)) {
        return Err(OracleError::ValueOutsideSet(bad.clone()));
    }
    let zero = BigInt::zero();
    let zero_allowed = value_set.contains(&zero);

    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(s.clone());
    queue.push_back(s.clone());

    while let Some(cur) = queue.pop_front() {
        let e = cur.entries();
        let mut next = Vec::new();
        for i in 0..e.len() {
            // delete a zero
            if e[i].is_zero() {
                next.push(remove_at(e, i));
            }
            // collapse ⟨a,a⟩ to ⟨a⟩
            if i + 1 < e.len() && e[i] == e[i + 1] {
                next.push(remove_at(e, i));
            }
        }
        if e.len() < max_len {
            for i in 0..=e.len() {
                if zero_allowed {
                    let mut w = e.to_vec();
                    w.insert(i, zero.clone());
                    next.push(w);
                }
                if i < e.len() {
                    let mut w = e.to_vec();
                    w.insert(i, e[i].clone());
                    next.push(w);
                }
            }
        }
        for w in next {
            let w = IntString(w);
            if !seen.contains(&w) {
                if seen.len() >= cap {
                    return Err(OracleError::StateCapExceeded { cap });
                }
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    Ok(seen)
}
