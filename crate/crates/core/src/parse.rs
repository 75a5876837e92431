//! Recursive-descent parser for polynomial expressions.
//!
//! Accepts `+ - * ^ ( )`, integer and `a/b` constants, and juxtaposition:
//! `bX1` is split greedily into the longest known variable names.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::RingRef;

pub fn parse_polynomial(ring: &RingRef, text: &str) -> Result<Polynomial> {
    parse_polynomial_at(ring, text, 1, 1)
}

/// Parses `text`, reporting errors relative to the given start position.
pub fn parse_polynomial_at(ring: &RingRef, text: &str, line: usize, column: usize) -> Result<Polynomial> {
    let mut p = Parser { ring, chars: text.chars().collect(), pos: 0, line, column };
    p.skip_ws();
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(f)
}

struct Parser<'a> {
    ring: &'a RingRef,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.column, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut sign = 1;
        let mut first = true;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                }
                Some('-') => {
                    self.bump();
                    sign = -sign;
                }
                _ if first => {}
                _ => return Err(self.error("expected '+' or '-'")),
            }
            self.skip_ws();
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t)? } else { acc.add(&t)? };
            sign = 1;
            first = false;
            self.skip_ws();
            match self.peek() {
                Some('+') | Some('-') => continue,
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(c: char) -> bool {
        c.is_ascii_alphanumeric() || c == '_' || c == '('
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    self.skip_ws();
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                Some('/') => {
                    self.bump();
                    self.skip_ws();
                    let (n, _) = self.integer()?;
                    let d = self.ring.field().from_bigint(&n);
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&self.ring.field().inv(&d));
                }
                Some(c) if Self::starts_factor(c) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.primary()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            let (line, column) = (self.line, self.column);
            self.bump();
            self.skip_ws();
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return Err(Error::Parse { line, column, message: "missing exponent after '^'".into() });
            }
            let (e, _) = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<(BigInt, usize)> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok((s.parse().expect("digits"), self.pos - start))
    }

    fn primary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let (n, _) = self.integer()?;
                Ok(Polynomial::constant(self.ring, self.ring.field().from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// Consumes an identifier, splitting it into variable names.
    fn identifier(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        let mut end = start;
        while self.chars.get(end).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            end += 1;
        }
        let word: String = self.chars[start..end].iter().collect();
        let mut acc = Polynomial::one(self.ring);
        let mut rest = word.as_str();
        while !rest.is_empty() {
            let best = self
                .ring
                .names()
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    acc = acc.mul(&Polynomial::var(self.ring, i))?;
                    for _ in 0..n.len() {
                        self.bump();
                    }
                    rest = &rest[n.len()..];
                }
                None => return Err(self.error(format!("unknown variable in '{word}'"))),
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::ring::{MonomialOrder, Ring};
    use proptest::prelude::*;

    fn family_ring() -> RingRef {
        let names = ["a", "b", "X1", "X2", "X3", "X4"].iter().map(|s| s.to_string()).collect();
        Ring::new(Field::Rational, names, vec![0, 0, 1, 1, 1, 1], MonomialOrder::Grevlex, true).unwrap()
    }

    #[test]
    fn juxtaposition_splits_into_variables() {
        let r = family_ring();
        let f = parse_polynomial(&r, "bX1-aX2").unwrap();
        let g = parse_polynomial(&r, "b*X1 - a*X2").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn fractions_and_powers() {
        let r = family_ring();
        let f = parse_polynomial(&r, "3/2*a^2*X1 - (X1+X2)^2").unwrap();
        assert_eq!(f.to_string(), "-X1^2-2*X1*X2-X2^2+3/2*a^2*X1");
    }

    #[test]
    fn error_position_points_at_problem() {
        let r = family_ring();
        match parse_polynomial_at(&r, "X1^", 3, 13) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 15)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial(&r, "X1 + q").is_err());
    }

    fn poly_strategy() -> impl Strategy<Value = Vec<(i64, Vec<u32>)>> {
        proptest::collection::vec((-20i64..20, proptest::collection::vec(0u32..4, 3)), 0..6)
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(field in prop_oneof![Just(Field::Rational), Just(Field::Prime(32003))],
                                        terms in poly_strategy(), den in 1i64..5) {
            let r = Ring::standard(field.clone(), &["x", "y", "z"]).unwrap();
            let terms = terms
                .into_iter()
                .map(|(c, e)| crate::poly::Term {
                    mon: r.monomial_from(&e),
                    coeff: field.from_fraction(&BigInt::from(c), &BigInt::from(den)).unwrap(),
                })
                .collect();
            let f = Polynomial::from_terms(&r, terms);
            let g = parse_polynomial(&r, &f.to_string()).unwrap();
            prop_assert_eq!(f, g);
        }
    }
}
