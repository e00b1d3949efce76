//! Laurent polynomials in `t = q^{1/2}` with rational coefficients.
//!
//! Every Hecke parameter in the crate is a monomial in `t`, and all structure
//! constants live in this ring. Division is only ever exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::expr::{self, Evaluator, ExprError};

/// Exact rational number used for all coefficients.
pub type Rational = BigRational;

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivByZero,
    #[error("{num} is not divisible by {den}")]
    NonDivisible { num: String, den: String },
    #[error("{0} is not a monomial")]
    NotMonomial(String),
    #[error("square root of {0} is not a Laurent monomial")]
    NoSquareRoot(String),
}

/// Sparse Laurent polynomial `sum c_k t^k`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    terms: BTreeMap<i32, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::monomial(rat(1), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::constant(rat(n))
    }

    pub fn constant(c: Rational) -> Self {
        Scalar::monomial(c, 0)
    }

    /// `c * t^k`.
    pub fn monomial(c: Rational, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Scalar { terms }
    }

    /// `t^k`.
    pub fn t_pow(k: i32) -> Self {
        Scalar::monomial(rat(1), k)
    }

    /// `q^k = t^{2k}`.
    pub fn q_pow(k: i32) -> Self {
        Scalar::t_pow(2 * k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i32) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest and highest exponent, or `None` for zero.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().next_back()?;
        Some((lo, hi))
    }

    /// `Some((c, k))` when the value is the single term `c t^k`.
    pub fn as_monomial(&self) -> Option<(&Rational, i32)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next()?;
            Some((c, *k))
        } else {
            None
        }
    }

    /// Exponent `k` when the value is exactly `t^k`.
    pub fn t_exponent(&self) -> Option<i32> {
        match self.as_monomial() {
            Some((c, k)) if c.is_one() => Some(k),
            _ => None,
        }
    }

    fn add_term(&mut self, k: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Substitutes `t -> t^{-1}`.
    pub fn bar(&self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(e, v)| (-e, v.clone())).collect(),
        }
    }

    /// Inverse of a nonzero monomial.
    pub fn inverse_monomial(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivByZero);
        }
        match self.as_monomial() {
            Some((c, k)) => Ok(Scalar::monomial(c.recip(), -k)),
            None => Err(ScalarError::NotMonomial(self.to_string())),
        }
    }

    /// Square root of `t^{2k}`, namely `t^k`.
    pub fn sqrt_monomial(&self) -> Result<Scalar, ScalarError> {
        match self.t_exponent() {
            Some(k) if k % 2 == 0 => Ok(Scalar::t_pow(k / 2)),
            _ => Err(ScalarError::NoSquareRoot(self.to_string())),
        }
    }

    /// Integer power; negative exponents need a monomial base.
    pub fn pow(&self, e: i32) -> Result<Scalar, ScalarError> {
        let (base, n) = if e < 0 {
            (self.inverse_monomial()?, e.unsigned_abs())
        } else {
            (self.clone(), e as u32)
        };
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact quotient `self / den`.
    pub fn exact_div(&self, den: &Scalar) -> Result<Scalar, ScalarError> {
        let (dlo, dhi) = den.degree_range().ok_or(ScalarError::DivByZero)?;
        let lead = den.terms[&dhi].clone();
        let mut rem = self.clone();
        let mut quot = Scalar::zero();
        let non_div = || ScalarError::NonDivisible {
            num: self.to_string(),
            den: den.to_string(),
        };
        let Some((nlo, _)) = rem.degree_range() else {
            return Ok(quot);
        };
        // every quotient exponent is at least nlo - dlo
        let floor = nlo - dlo;
        while let Some((_, rhi)) = rem.degree_range() {
            let k = rhi - dhi;
            if k < floor {
                return Err(non_div());
            }
            let c = &rem.terms[&rhi] / &lead;
            for (e, v) in den.terms() {
                rem.add_term(e + k, -(v * &c));
            }
            quot.add_term(k, c);
        }
        Ok(quot)
    }

    /// Renders as `c*t^k + ...` with ascending exponents.
    pub fn to_t_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(k, c)| format!("{c}*t^{k}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// True when the rendering needs parentheses as a factor.
    pub fn needs_parens(&self) -> bool {
        self.terms.len() > 1
    }
}

fn q_power_text(k: i32) -> String {
    if k % 2 == 0 {
        format!("q^{}", k / 2)
    } else {
        format!("q^({k}/2)")
    }
}

impl fmt::Display for Scalar {
    /// Descending powers of `q`, half-integral powers as `q^(n/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", q_power_text(*k))?;
            } else {
                write!(f, "{mag}*{}", q_power_text(*k))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

struct ScalarEval;

impl Evaluator for ScalarEval {
    type Value = Scalar;

    fn scalar(&self, s: Scalar) -> Scalar {
        s
    }

    fn generator(&self, kind: &str, body: &str) -> Result<Scalar, ExprError> {
        Err(ExprError::UnknownGenerator(format!("{kind}[{body}]")))
    }

    fn add(&self, a: Scalar, b: Scalar) -> Result<Scalar, ExprError> {
        Ok(a + b)
    }

    fn mul(&self, a: Scalar, b: Scalar) -> Result<Scalar, ExprError> {
        Ok(&a * &b)
    }

    fn pow(&self, a: Scalar, e: i32) -> Result<Scalar, ExprError> {
        a.pow(e).map_err(|err| ExprError::Eval(err.to_string()))
    }
}

impl FromStr for Scalar {
    type Err = ExprError;

    /// Accepts expressions in `q`, `t`, `q^(n/2)`, `t^n` and rationals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        expr::evaluate(s, &ScalarEval)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(c: Rational) -> Self {
        Scalar::constant(c)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, c) in rhs.terms() {
            self.add_term(k, c.clone());
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (k, c) in rhs.terms() {
            self.add_term(k, -c.clone());
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}
