//! Text front-end: linear equations, integer string literals, and pseudo-sum
//! combinations of a single idempotent ultrafilter symbol `U`.
//!
//! ```text
//! equation     = first_term , { sign , term } , "=" , integer ;
//! first_term   = [ sign ] , term ;
//! term         = [ integer , [ "*" ] ] , identifier ;
//! identifier   = letter , { letter | digit | "_" } ;
//!
//! combination  = summand , { "(+)" , summand } ;
//! summand      = [ integer , [ "*" ] ] , "U" ;
//!
//! int_string   = "[" , [ entry , { "," , entry } ] , "]" ;
//! entry        = [ sign ] , integer | '"' , [ sign ] , integer , '"' ;
//! ```
//!
//! Whitespace may appear between any two tokens. Error columns are 1-based
//! and count characters, not bytes.
//!
//! A combination `a₀U ⊕ … ⊕ a_kU` is identified with its coefficient string
//! ⟨a₀, …, a_k⟩. Two combinations are equal for every idempotent `U` exactly
//! when their strings are u-equivalent, so equality is decided on strings.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ueq::{reduce, u_equiv, IntString};
use crate::witness::EquationCoeffs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("{0}")]
    Semantic(String),
}

/// An equation together with the variable names in order of appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedEquation {
    pub eq: EquationCoeffs,
    pub variable_names: Vec<String>,
}

/// `a₀U ⊕ a₁U ⊕ … ⊕ a_kU` for a symbolic idempotent ultrafilter `U`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UltraExpr {
    coeffs: Vec<BigUint>,
}

impl UltraExpr {
    pub fn new(coeffs: Vec<BigUint>) -> Self {
        UltraExpr { coeffs }
    }

    pub fn from_u64(coeffs: &[u64]) -> Self {
        UltraExpr::new(coeffs.iter().map(|&a| BigUint::from(a)).collect())
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn to_int_string(&self) -> IntString {
        self.coeffs.iter().map(|a| BigInt::from(a.clone())).collect()
    }

    /// Pseudo-sum `self ⊕ other`, which concatenates coefficient strings.
    pub fn pseudo_sum(&self, other: &UltraExpr) -> UltraExpr {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend_from_slice(&other.coeffs);
        UltraExpr { coeffs }
    }
}

impl fmt::Display for UltraExpr {
    /// `60U (+) 48U`; coefficient 1 prints as `U`, the empty combination
    /// (the principal ultrafilter at 0) as `0U`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0U");
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" (+) ")?;
            }
            if a.is_one() {
                f.write_str("U")?;
            } else {
                write!(f, "{a}U")?;
            }
        }
        Ok(())
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    /// Next non-space character, without consuming it.
    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse {
            column: self.column(),
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let want: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&want) {
            self.pos += want.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn expect_end(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected '{c}'")),
        }
    }

    fn digits(&mut self) -> Option<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Some(s.parse().expect("ascii digits"))
    }

    fn identifier(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.chars.get(self.pos).is_some_and(|c| c.is_alphabetic()) {
            return None;
        }
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    fn sign(&mut self) -> Option<Sign> {
        if self.eat('+') {
            Some(Sign::Plus)
        } else if self.eat('-') {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// Parses `3x1 + x2 + x3 - x4 - 4x5 = 0`.
pub fn parse_equation(text: &str) -> Result<ParsedEquation, ExprError> {
    let mut cur = Cursor::new(text);
    let mut coeffs = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut seen = HashSet::new();

    loop {
        let sign = cur.sign();
        if sign.is_none() && !coeffs.is_empty() {
            break;
        }
        let sign = sign.unwrap_or(Sign::Plus);
        let coeff_col = {
            cur.skip_ws();
            cur.column()
        };
        let magnitude = match cur.digits() {
            Some(m) => {
                cur.eat('*');
                m
            }
            None => BigUint::one(),
        };
        let name_col = {
            cur.skip_ws();
            cur.column()
        };
        let Some(name) = cur.identifier() else {
            return cur.error("expected a variable name");
        };
        if magnitude.is_zero() {
            return Err(ExprError::Semantic(format!(
                "coefficient of {name} (column {coeff_col}) is zero"
            )));
        }
        if !seen.insert(name.clone()) {
            return Err(ExprError::Semantic(format!(
                "variable {name} repeated at column {name_col}"
            )));
        }
        coeffs.push(BigInt::from_biguint(sign, magnitude));
        names.push(name);
    }

    cur.expect('=')?;
    let rhs_sign = cur.sign();
    let Some(rhs) = cur.digits() else {
        return cur.error("expected an integer on the right-hand side");
    };
    cur.expect_end()?;
    if !rhs.is_zero() {
        let rhs = BigInt::from_biguint(rhs_sign.unwrap_or(Sign::Plus), rhs);
        return Err(ExprError::Semantic(format!(
            "right-hand side must be 0, found {rhs}"
        )));
    }
    let eq = EquationCoeffs::new(coeffs).map_err(|e| ExprError::Semantic(e.to_string()))?;
    Ok(ParsedEquation {
        eq,
        variable_names: names,
    })
}

/// Parses `2U (+) U` into ⟨2, 1⟩.
pub fn parse_combination(text: &str) -> Result<UltraExpr, ExprError> {
    let mut cur = Cursor::new(text);
    let mut coeffs = Vec::new();
    loop {
        if cur.at_end() {
            return cur.error("expected a summand such as 2U");
        }
        cur.skip_ws();
        let col = cur.column();
        if cur.eat('-') {
            return Err(ExprError::Semantic(format!(
                "negative coefficient at column {col}; combinations take coefficients in N0"
            )));
        }
        cur.eat('+');
        let coeff = match cur.digits() {
            Some(a) => {
                cur.eat('*');
                a
            }
            None => BigUint::one(),
        };
        cur.skip_ws();
        let sym_col = cur.column();
        match cur.identifier() {
            Some(sym) if sym == "U" => {}
            Some(sym) => {
                return Err(ExprError::Semantic(format!(
                    "unknown symbol {sym} at column {sym_col}; only the single symbol U is supported"
                )))
            }
            None => return cur.error("expected the symbol U"),
        }
        coeffs.push(coeff);
        if cur.at_end() {
            break;
        }
        if !cur.eat_str("(+)") {
            return cur.error("expected '(+)' between summands");
        }
    }
    Ok(UltraExpr { coeffs })
}

/// Parses an integer string literal such as `[3,0,-4]` or `["3","0","-4"]`.
pub fn parse_int_string(text: &str) -> Result<IntString, ExprError> {
    let mut cur = Cursor::new(text);
    cur.expect('[')?;
    let mut entries = Vec::new();
    if !cur.eat(']') {
        loop {
            let quoted = cur.eat('"');
            let sign = cur.sign().unwrap_or(Sign::Plus);
            let Some(m) = cur.digits() else {
                return cur.error("expected an integer");
            };
            if quoted {
                cur.expect('"')?;
            }
            entries.push(BigInt::from_biguint(sign, m));
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    cur.expect_end()?;
    Ok(IntString::new(entries))
}

/// Equal as ultrafilters for every idempotent `U`.
pub fn combinations_equal(e1: &UltraExpr, e2: &UltraExpr) -> bool {
    u_equiv(&e1.to_int_string(), &e2.to_int_string())
}

/// The representative without zero coefficients or adjacent repeats.
pub fn canonical_combination(e: &UltraExpr) -> UltraExpr {
    let coeffs = reduce(&e.to_int_string())
        .iter()
        .map(|a| a.to_biguint().expect("entries are nonnegative"))
        .collect();
    UltraExpr { coeffs }
}
