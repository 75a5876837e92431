//! Graded polynomial rings, monomials and monomial orders.
//!
//! Every variable carries a non-negative weight. Weight-zero variables are
//! *base* variables (coordinates on the base of a family); positive-weight
//! variables are the fiber coordinates `X_1..X_n`. A second, independent
//! weight vector carries the Rees `T`-degree for bigraded rings.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::coeff::Field;
use crate::error::{Error, Result};

pub type Exp = u16;
pub type Exps = SmallVec<[Exp; 8]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Weighted degree, then total degree, then reverse lexicographic.
    Grevlex,
    Lex,
    /// Block order: monomials in the masked variables are compared first
    /// (total degree, then reverse lexicographic), the rest by `Grevlex`.
    Elimination(Vec<bool>),
}

impl MonomialOrder {
    pub fn tag(&self) -> &'static str {
        match self {
            MonomialOrder::Grevlex => "grevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::Elimination(_) => "elimination",
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Field,
    names: Vec<String>,
    weights: Vec<u32>,
    tweights: Vec<u32>,
    order: MonomialOrder,
    local_base: bool,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    /// Builds a graded polynomial ring. `weights[i] == 0` marks a base variable.
    pub fn new(
        field: Field,
        names: Vec<String>,
        weights: Vec<u32>,
        order: MonomialOrder,
        local_base: bool,
    ) -> Result<RingRef> {
        let n = names.len();
        Self::with_bigrading(field, names, weights, vec![0; n], order, local_base)
    }

    pub fn with_bigrading(
        field: Field,
        names: Vec<String>,
        weights: Vec<u32>,
        tweights: Vec<u32>,
        order: MonomialOrder,
        local_base: bool,
    ) -> Result<RingRef> {
        if names.is_empty() {
            return Err(Error::InvalidRing("a ring needs at least one variable".into()));
        }
        if weights.len() != names.len() || tweights.len() != names.len() {
            return Err(Error::InvalidRing("one weight per variable is required".into()));
        }
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::InvalidRing("at least one variable must have positive weight".into()));
        }
        if let Field::Prime(p) = field {
            Field::prime(p)?;
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable {name}")));
            }
        }
        if let MonomialOrder::Elimination(mask) = &order {
            if mask.len() != names.len() {
                return Err(Error::InvalidRing("elimination mask has wrong length".into()));
            }
        }
        if local_base && weights.iter().all(|&w| w > 0) {
            return Err(Error::InvalidRing("local base requested but the ring has no base variables".into()));
        }
        Ok(Arc::new(Ring { field, names, weights, tweights, order, local_base }))
    }

    /// Standard-graded ring over `field` in the given variables, grevlex order.
    pub fn standard(field: Field, names: &[&str]) -> Result<RingRef> {
        Self::new(
            field,
            names.iter().map(|s| s.to_string()).collect(),
            vec![1; names.len()],
            MonomialOrder::Grevlex,
            false,
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn tweights(&self) -> &[u32] {
        &self.tweights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_local_base(&self) -> bool {
        self.local_base
    }

    /// Number of positive-weight variables.
    pub fn n(&self) -> usize {
        self.weights.iter().filter(|&&w| w > 0).count()
    }

    /// Sum of the positive weights.
    pub fn sigma(&self) -> i64 {
        self.weights.iter().map(|&w| w as i64).sum()
    }

    pub fn base_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.weights[i] == 0).collect()
    }

    pub fn positive_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.weights[i] > 0).collect()
    }

    pub fn has_base(&self) -> bool {
        self.weights.contains(&0)
    }

    pub fn is_standard_graded(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    /// Same variables and weights, different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<RingRef> {
        Self::with_bigrading(
            self.field.clone(),
            self.names.clone(),
            self.weights.clone(),
            self.tweights.clone(),
            order,
            self.local_base,
        )
    }

    /// The fiber ring `k[X]` over the positive-weight variables.
    pub fn fiber_ring(&self) -> Result<RingRef> {
        let pos = self.positive_vars();
        Self::with_bigrading(
            self.field.clone(),
            pos.iter().map(|&i| self.names[i].clone()).collect(),
            pos.iter().map(|&i| self.weights[i]).collect(),
            pos.iter().map(|&i| self.tweights[i]).collect(),
            MonomialOrder::Grevlex,
            false,
        )
    }

    pub fn same(a: &RingRef, b: &RingRef) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub fn one(&self) -> Monomial {
        Monomial { exps: SmallVec::from_elem(0, self.nvars()), deg: 0, tdeg: 0, total: 0 }
    }

    pub fn var(&self, i: usize) -> Monomial {
        let mut e: Exps = SmallVec::from_elem(0, self.nvars());
        e[i] = 1;
        self.monomial(e)
    }

    pub fn monomial(&self, exps: Exps) -> Monomial {
        assert_eq!(exps.len(), self.nvars());
        let mut deg = 0i64;
        let mut tdeg = 0i64;
        let mut total = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            deg += self.weights[i] as i64 * e as i64;
            tdeg += self.tweights[i] as i64 * e as i64;
            total += e as u32;
        }
        Monomial { exps, deg, tdeg, total }
    }

    pub fn monomial_from(&self, exps: &[u32]) -> Monomial {
        self.monomial(exps.iter().map(|&e| e as Exp).collect())
    }

    pub fn lcm(&self, a: &Monomial, b: &Monomial) -> Monomial {
        self.monomial(a.exps.iter().zip(&b.exps).map(|(x, y)| *x.max(y)).collect())
    }

    pub fn gcd(&self, a: &Monomial, b: &Monomial) -> Monomial {
        self.monomial(a.exps.iter().zip(&b.exps).map(|(x, y)| *x.min(y)).collect())
    }

    /// Compares two monomials in this ring's order.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match &self.order {
            MonomialOrder::Grevlex => a
                .deg
                .cmp(&b.deg)
                .then(a.total.cmp(&b.total))
                .then_with(|| revlex(&a.exps, &b.exps, |_| true)),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Elimination(mask) => {
                let block = |m: &Monomial| -> u32 {
                    m.exps.iter().zip(mask).filter(|(_, &b)| b).map(|(e, _)| *e as u32).sum()
                };
                let rest_deg = |m: &Monomial| -> i64 {
                    m.exps
                        .iter()
                        .zip(mask)
                        .enumerate()
                        .filter(|(_, (_, &b))| !b)
                        .map(|(i, (e, _))| self.weights[i] as i64 * *e as i64)
                        .sum()
                };
                let rest_total = |m: &Monomial| -> u32 {
                    m.exps.iter().zip(mask).filter(|(_, &b)| !b).map(|(e, _)| *e as u32).sum()
                };
                block(a)
                    .cmp(&block(b))
                    .then_with(|| revlex(&a.exps, &b.exps, |i| mask[i]))
                    .then_with(|| rest_deg(a).cmp(&rest_deg(b)))
                    .then_with(|| rest_total(a).cmp(&rest_total(b)))
                    .then_with(|| revlex(&a.exps, &b.exps, |i| !mask[i]))
            }
        }
    }
}

/// Reverse lexicographic comparison restricted to the variables selected by
/// `keep`: the monomial with the smaller exponent in the last differing
/// variable is the larger one.
fn revlex(a: &[Exp], b: &[Exp], keep: impl Fn(usize) -> bool) -> Ordering {
    for i in (0..a.len()).rev() {
        if !keep(i) {
            continue;
        }
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// An exponent vector with cached weighted degree, `T`-degree and total degree.
#[derive(Clone, Debug)]
pub struct Monomial {
    exps: Exps,
    deg: i64,
    tdeg: i64,
    total: u32,
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.exps == other.exps
    }
}

impl Eq for Monomial {}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.exps.hash(state);
    }
}

impl Monomial {
    pub fn exps(&self) -> &[Exp] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> Exp {
        self.exps[i]
    }

    /// Weighted degree over the positive-weight variables.
    pub fn deg(&self) -> i64 {
        self.deg
    }

    /// Second grading component (Rees `T`-degree).
    pub fn tdeg(&self) -> i64 {
        self.tdeg
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn is_one(&self) -> bool {
        self.total == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            deg: self.deg + other.deg,
            tdeg: self.tdeg + other.tdeg,
            total: self.total + other.total,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            deg: other.deg - self.deg,
            tdeg: other.tdeg - self.tdeg,
            total: other.total - self.total,
        })
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Degree in the selected variables only.
    pub fn partial_total(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&i| self.exps[i] as u32).sum()
    }

    /// Bit `i` is set when variable `i < 64` occurs.
    pub fn divmask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &e) in self.exps.iter().enumerate().take(64) {
            if e > 0 {
                m |= 1 << i;
            }
        }
        m
    }
}

pub struct MonomialDisplay<'a> {
    pub ring: &'a Ring,
    pub mon: &'a Monomial,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.mon.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.ring.names[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xyz() -> RingRef {
        Ring::standard(Field::Prime(32003), &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn make_ring_counts_positive_weights() {
        let r = xyz();
        assert_eq!((r.n(), r.sigma()), (3, 3));
        let names = ["a", "b", "X1", "X2", "X3", "X4"].iter().map(|s| s.to_string()).collect();
        let r = Ring::new(Field::Rational, names, vec![0, 0, 1, 1, 1, 1], MonomialOrder::Grevlex, true)
            .unwrap();
        assert_eq!((r.n(), r.sigma()), (4, 4));
        assert_eq!(r.base_vars(), vec![0, 1]);
    }

    #[test]
    fn bigraded_rees_ambient() {
        let names: Vec<String> =
            ["x", "y", "z", "w", "T0", "T1"].iter().map(|s| s.to_string()).collect();
        let mask = vec![false, false, false, false, false, false];
        let r = Ring::with_bigrading(
            Field::Prime(32003),
            names,
            vec![1, 1, 1, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 1],
            MonomialOrder::Elimination(mask),
            false,
        )
        .unwrap();
        let m = r.var(4).mul(&r.var(0)).mul(&r.var(0));
        assert_eq!((m.deg(), m.tdeg()), (2, 1));
    }

    #[test]
    fn bad_rings() {
        assert!(Ring::new(Field::Rational, vec![], vec![], MonomialOrder::Grevlex, false).is_err());
        assert!(Ring::new(Field::Rational, vec!["a".into()], vec![0], MonomialOrder::Grevlex, false)
            .is_err());
        assert!(Ring::new(Field::Prime(32001), vec!["a".into()], vec![1], MonomialOrder::Grevlex, false)
            .is_err());
    }

    #[test]
    fn identical_inputs_give_interchangeable_rings() {
        assert!(Ring::same(&xyz(), &xyz()));
    }

    fn orders() -> Vec<RingRef> {
        let names: Vec<String> = ["a", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
        vec![
            Ring::new(Field::Prime(7), names.clone(), vec![0, 1, 2, 1], MonomialOrder::Grevlex, false)
                .unwrap(),
            Ring::new(Field::Prime(7), names.clone(), vec![1, 1, 1, 1], MonomialOrder::Lex, false).unwrap(),
            Ring::new(
                Field::Prime(7),
                names,
                vec![1, 1, 1, 1],
                MonomialOrder::Elimination(vec![true, false, true, false]),
                false,
            )
            .unwrap(),
        ]
    }

    fn exps() -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0u32..5, 4)
    }

    proptest! {
        #[test]
        fn orders_are_total_and_multiplicative(k in 0usize..3, u in exps(), v in exps(), w in exps()) {
            let rings = orders();
            let r = &rings[k];
            let (u, v, w) = (r.monomial_from(&u), r.monomial_from(&v), r.monomial_from(&w));
            let c = r.cmp(&u, &v);
            prop_assert_eq!(c == Ordering::Equal, u == v);
            prop_assert_eq!(r.cmp(&v, &u), c.reverse());
            prop_assert_eq!(r.cmp(&u.mul(&w), &v.mul(&w)), c);
            prop_assert!(r.cmp(&u.mul(&w), &u) != Ordering::Less);
        }
    }

    #[test]
    fn grevlex_is_degree_compatible() {
        let r = xyz();
        let x2 = r.monomial_from(&[2, 0, 0]);
        let yz = r.monomial_from(&[0, 1, 1]);
        let xz = r.monomial_from(&[1, 0, 1]);
        let y = r.var(1);
        assert_eq!(r.cmp(&x2, &y), Ordering::Greater);
        assert_eq!(r.cmp(&yz, &xz), Ordering::Less);
    }
}
