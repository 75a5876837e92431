//! Sparse polynomials in canonical form.

use std::cmp::Ordering;
use std::fmt;

use crate::coeff::{Coeff, Field};
use crate::error::{Error, Result};
use crate::ring::{Monomial, MonomialDisplay, Ring, RingRef};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mon: Monomial,
    pub coeff: Coeff,
}

/// Terms are kept strictly descending in the ring order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

/// Common degree of the terms of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multidegree {
    Zero,
    Homogeneous { deg: i64, tdeg: i64 },
    Inhomogeneous,
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: Coeff) -> Self {
        Self::term(ring, ring.one(), c)
    }

    pub fn from_i64(ring: &RingRef, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::from_i64(ring, 1)
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::term(ring, ring.var(i), ring.field().one())
    }

    pub fn term(ring: &RingRef, mon: Monomial, coeff: Coeff) -> Self {
        if coeff.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![Term { mon, coeff }] }
    }

    /// Builds a polynomial from arbitrary terms, sorting and combining.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| ring.cmp(&b.mon, &a.mon));
        let field = ring.field();
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mon == t.mon => {
                    last.coeff = field.add(&last.coeff, &t.coeff);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mon.is_one())
    }

    /// The coefficient of the monomial 1.
    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some(t) if t.mon.is_one() => t.coeff.clone(),
            _ => self.field().zero(),
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if Ring::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let field = self.ring.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let conv = |c: &Coeff| if negate { field.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match self.ring.cmp(&a[i].mon, &b[j].mon) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term { mon: b[j].mon.clone(), coeff: conv(&b[j].coeff) });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        field.sub(&a[i].coeff, &b[j].coeff)
                    } else {
                        field.add(&a[i].coeff, &b[j].coeff)
                    };
                    if !c.is_zero() {
                        out.push(Term { mon: a[i].mon.clone(), coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| Term { mon: t.mon.clone(), coeff: conv(&t.coeff) }));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.ring.field();
        let terms = self
            .terms
            .iter()
            .map(|t| Term { mon: t.mon.clone(), coeff: field.neg(&t.coeff) })
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let field = self.ring.field();
        let terms = self
            .terms
            .iter()
            .map(|t| Term { mon: t.mon.clone(), coeff: field.mul(&t.coeff, c) })
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// `c * m * self`; multiplication by a monomial preserves the order.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let field = self.ring.field();
        let terms = self
            .terms
            .iter()
            .map(|t| Term { mon: t.mon.mul(m), coeff: field.mul(&t.coeff, c) })
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = Self::zero(&self.ring);
        for t in &small.terms {
            acc = acc.merge(&big.mul_term(&t.mon, &t.coeff), false);
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some(t) => self.scale(&self.field().inv(&t.coeff)),
        }
    }

    pub fn multidegree(&self) -> Multidegree {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else { return Multidegree::Zero };
        let (deg, tdeg) = (first.mon.deg(), first.mon.tdeg());
        if it.all(|t| t.mon.deg() == deg && t.mon.tdeg() == tdeg) {
            Multidegree::Homogeneous { deg, tdeg }
        } else {
            Multidegree::Inhomogeneous
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.multidegree(), Multidegree::Inhomogeneous)
    }

    /// Degree for homogeneous nonzero polynomials.
    pub fn degree(&self) -> Option<i64> {
        match self.multidegree() {
            Multidegree::Homogeneous { deg, .. } => Some(deg),
            _ => None,
        }
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.iter().map(|t| t.mon.deg()).max()
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn map(&self, target: &RingRef, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::InvalidArgument("one image per variable is required".into()));
        }
        if self.ring.field() != target.field() {
            return Err(Error::RingMismatch);
        }
        let mut acc = Polynomial::zero(target);
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(target)]; images.len()];
        for t in &self.terms {
            let mut prod = Polynomial::constant(target, t.coeff.clone());
            for (i, &e) in t.mon.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                prod = prod.mul(&powers[i][e as usize])?;
            }
            acc = acc.add(&prod)?;
        }
        Ok(acc)
    }

    /// Substitutes constants for the selected variables, staying in the same ring.
    pub fn substitute(&self, values: &[(usize, Coeff)]) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.ring.nvars())
            .map(|i| match values.iter().find(|(j, _)| *j == i) {
                Some((_, c)) => Polynomial::constant(&self.ring, c.clone()),
                None => Polynomial::var(&self.ring, i),
            })
            .collect();
        self.map(&self.ring, &images).expect("same ring")
    }

    pub fn evaluate(&self, point: &[Coeff]) -> Coeff {
        let field = self.ring.field();
        let mut acc = field.zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (i, &e) in t.mon.exps().iter().enumerate() {
                if e > 0 {
                    v = field.mul(&v, &field.pow(&point[i], e as u32));
                }
            }
            acc = field.add(&acc, &v);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let field = self.ring.field();
        let mut terms = Vec::new();
        for t in &self.terms {
            let e = t.mon.exp(var);
            if e == 0 {
                continue;
            }
            let mut exps: crate::ring::Exps = t.mon.exps().into();
            exps[var] -= 1;
            terms.push(Term {
                mon: self.ring.monomial(exps),
                coeff: field.mul(&t.coeff, &field.from_i64(e as i64)),
            });
        }
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Moves the polynomial into another ring whose variables are a superset
    /// (matched by name). Fails when a variable is missing.
    pub fn embed(&self, target: &RingRef) -> Result<Polynomial> {
        let idx: Vec<usize> = self
            .ring
            .names()
            .iter()
            .map(|n| {
                target
                    .var_index(n)
                    .ok_or_else(|| Error::InvalidArgument(format!("variable {n} missing in target ring")))
            })
            .collect::<Result<_>>()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps: crate::ring::Exps = smallvec::SmallVec::from_elem(0, target.nvars());
            for (i, &e) in t.mon.exps().iter().enumerate() {
                exps[idx[i]] = e;
            }
            terms.push(Term { mon: target.monomial(exps), coeff: t.coeff.clone() });
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Inverse of `embed`: projects onto a ring in a subset of the variables;
    /// fails when a term involves a variable absent from the target.
    pub fn restrict(&self, target: &RingRef) -> Result<Polynomial> {
        let idx: Vec<Option<usize>> = self.ring.names().iter().map(|n| target.var_index(n)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps: crate::ring::Exps = smallvec::SmallVec::from_elem(0, target.nvars());
            for (i, &e) in t.mon.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match idx[i] {
                    Some(j) => exps[j] = e,
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "term involves {} which the target ring lacks",
                            self.ring.name(i)
                        )))
                    }
                }
            }
            terms.push(Term { mon: target.monomial(exps), coeff: t.coeff.clone() });
        }
        Ok(Polynomial::from_terms(target, terms))
    }
}

/// Writes a coefficient in signed form; prime-field residues use the
/// symmetric range so that `-1` prints as `-1`.
pub(crate) fn signed_coeff(field: &Field, c: &Coeff) -> (bool, String) {
    match (field, c) {
        (Field::Prime(_), _) => {
            let v = field.to_i64(c).expect("residue");
            (v < 0, v.abs().to_string())
        }
        (Field::Rational, Coeff::Rational(q)) => {
            let s = q.to_string();
            match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            }
        }
        _ => (false, c.to_string()),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let (neg, mag) = signed_coeff(self.field(), &t.coeff);
            if neg {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            let mon = MonomialDisplay { ring: &self.ring, mon: &t.mon };
            if t.mon.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{mon}")?;
            } else {
                write!(f, "{mag}*{mon}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ring() -> RingRef {
        Ring::standard(Field::Prime(32003), &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        assert_eq!(p.to_string(), "x^2-y^2");
    }

    #[test]
    fn product_degree_adds() {
        let r = Ring::standard(Field::Prime(32003), &["X1", "X2", "X3", "X4"]).unwrap();
        let f = parse_polynomial(&r, "X1^2*X2-X3^2*X4").unwrap();
        let g = parse_polynomial(&r, "X2^3").unwrap();
        assert_eq!(f.degree(), Some(3));
        assert_eq!(f.mul(&g).unwrap().degree(), Some(6));
    }

    #[test]
    fn inhomogeneous_marker() {
        let r = ring();
        let f = parse_polynomial(&r, "x+x^2").unwrap();
        assert_eq!(f.multidegree(), Multidegree::Inhomogeneous);
    }

    #[test]
    fn rees_bidegree() {
        let names = ["x", "y", "T0"].iter().map(|s| s.to_string()).collect();
        let r = Ring::with_bigrading(
            Field::Prime(32003),
            names,
            vec![1, 1, 0],
            vec![0, 0, 1],
            crate::ring::MonomialOrder::Grevlex,
            false,
        )
        .unwrap();
        let f = parse_polynomial(&r, "T0*x^2").unwrap();
        assert_eq!(f.multidegree(), Multidegree::Homogeneous { deg: 2, tdeg: 1 });
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = ring();
        let b = Ring::standard(Field::Rational, &["x", "y", "z"]).unwrap();
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&b, 0);
        assert_eq!(x.add(&y), Err(Error::RingMismatch));
    }

    #[test]
    fn modular_coefficients_print_symmetric() {
        let r = ring();
        let f = parse_polynomial(&r, "32002*x+2*y-3").unwrap();
        assert_eq!(f.to_string(), "-x+2*y-3");
    }
}
