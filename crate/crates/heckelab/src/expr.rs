//! Expression grammar shared by scalars and algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := rational | 'q' | 't' | name '[' raw ']' | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! `q` and `t` accept rational exponents as long as the resulting power of
//! `t` is integral; every other base takes integer exponents.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("unknown function {0}")]
    UnknownFunction(String),
    #[error("{0}")]
    Eval(String),
}

/// Interprets parsed atoms in a concrete ring.
pub trait Evaluator {
    type Value: Clone;

    fn scalar(&self, s: Scalar) -> Self::Value;
    fn generator(&self, kind: &str, body: &str) -> Result<Self::Value, ExprError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ExprError>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ExprError>;
    fn pow(&self, a: Self::Value, e: i32) -> Result<Self::Value, ExprError>;

    fn call(&self, name: &str, _arg: Self::Value) -> Result<Self::Value, ExprError> {
        Err(ExprError::UnknownFunction(name.to_string()))
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    /// `t^k` for the stored exponent of `t`.
    TPow(i32),
    Gen {
        kind: String,
        body: String,
    },
    Call {
        name: String,
        arg: Box<Expr>,
    },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<Rational, ExprError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let num = self.integer()?;
            let den = if self.eat(b'/') {
                self.integer()?
            } else {
                BigInt::one()
            };
            self.expect(b')')?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            let r = Rational::new(num, den);
            Ok(if neg { -r } else { r })
        } else {
            let neg = self.eat(b'-');
            let r = Rational::from_integer(self.integer()?);
            Ok(if neg { -r } else { r })
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        match base {
            Expr::TPow(k) => {
                let total = e * Rational::from_integer(BigInt::from(k));
                if !total.is_integer() {
                    self.pos = start;
                    return self.err("power of t must be integral");
                }
                match total.to_integer().to_i32() {
                    Some(v) => Ok(Expr::TPow(v)),
                    None => self.err("exponent out of range"),
                }
            }
            other => {
                if !e.is_integer() {
                    return self.err("fractional exponent on a non-monomial base");
                }
                match e.to_integer().to_i32() {
                    Some(v) => Ok(Expr::Pow(Box::new(other), v)),
                    None => self.err("exponent out of range"),
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.eat(b'/') {
                    let den = self.integer()?;
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    Ok(Expr::Num(Rational::new(num, den)))
                } else {
                    Ok(Expr::Num(Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                if self.src.get(self.pos) == Some(&b'[') {
                    self.pos += 1;
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos] != b']' {
                        self.pos += 1;
                    }
                    if self.pos >= self.src.len() {
                        return self.err("unterminated '['");
                    }
                    let body = String::from_utf8_lossy(&self.src[start..self.pos])
                        .trim()
                        .to_string();
                    self.pos += 1;
                    return Ok(Expr::Gen { kind: name, body });
                }
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(b')')?;
                    return Ok(Expr::Call {
                        name,
                        arg: Box::new(arg),
                    });
                }
                match name.as_str() {
                    "q" => Ok(Expr::TPow(2)),
                    "t" => Ok(Expr::TPow(1)),
                    _ => self.err(format!("unknown symbol '{name}'")),
                }
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
        }
    }
}

/// Parses a full expression.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Evaluates a parsed expression with `ev`.
pub fn eval<E: Evaluator>(e: &Expr, ev: &E) -> Result<E::Value, ExprError> {
    Ok(match e {
        Expr::Num(r) => ev.scalar(Scalar::constant(r.clone())),
        Expr::TPow(k) => ev.scalar(Scalar::t_pow(*k)),
        Expr::Gen { kind, body } => ev.generator(kind, body)?,
        Expr::Call { name, arg } => ev.call(name, eval(arg, ev)?)?,
        Expr::Add(a, b) => ev.add(eval(a, ev)?, eval(b, ev)?)?,
        Expr::Sub(a, b) => {
            let rhs = ev.mul(ev.scalar(Scalar::from_int(-1)), eval(b, ev)?)?;
            ev.add(eval(a, ev)?, rhs)?
        }
        Expr::Mul(a, b) => ev.mul(eval(a, ev)?, eval(b, ev)?)?,
        Expr::Neg(a) => ev.mul(ev.scalar(Scalar::from_int(-1)), eval(a, ev)?)?,
        Expr::Pow(a, k) => ev.pow(eval(a, ev)?, *k)?,
    })
}

/// Parses and evaluates in one step.
pub fn evaluate<E: Evaluator>(src: &str, ev: &E) -> Result<E::Value, ExprError> {
    eval(&parse(src)?, ev)
}

/// Parses a comma or whitespace separated list of integers, as in `th[1,-1]`.
pub fn parse_int_list(body: &str) -> Result<Vec<i64>, ExprError> {
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i64>().map_err(|_| ExprError::Parse {
                pos: 0,
                msg: format!("bad integer '{s}'"),
            })
        })
        .collect()
}

/// Exponentiation by squaring for evaluator implementations.
pub fn repeated_pow<V: Clone, F>(base: V, one: V, n: u32, mut mul: F) -> Result<V, ExprError>
where
    F: FnMut(V, V) -> Result<V, ExprError>,
{
    let mut acc = one;
    let mut b = base;
    let mut k = n;
    while k > 0 {
        if k.is_odd() {
            acc = mul(acc, b.clone())?;
        }
        k >>= 1;
        if k > 0 {
            b = mul(b.clone(), b)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generators_and_powers() {
        let e = parse("T[s1]*T[s0] + (q-1)*T[e]").unwrap();
        assert!(matches!(e, Expr::Add(..)));
        let e = parse("th[1,-1]*T[s1] + q^(1/2)*th[0,0]").unwrap();
        assert!(matches!(e, Expr::Add(..)));
        assert_eq!(parse("q^(3/2)").unwrap(), Expr::TPow(3));
        assert_eq!(parse("t^-2").unwrap(), Expr::TPow(-2));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["T[s1]*", "(q", "q^(1/3)", "1/0", "x", "T[s1", "q q"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("1,-1").unwrap(), vec![1, -1]);
        assert_eq!(parse_int_list("").unwrap(), Vec::<i64>::new());
        assert!(parse_int_list("a").is_err());
    }
}
