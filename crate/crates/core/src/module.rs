//! Graded free modules, module monomial orders and sparse vectors.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Term};
use crate::ring::{Monomial, MonomialOrder, Ring, RingRef};

/// Data inducing a Schreyer order on a free module `F_k` from a resolution
/// frame: each basis vector remembers its total leading monomial down in
/// `F_0`, the `F_0` component it lands in, and the chain of basis indices it
/// came through (level 1 first, its own index last).
#[derive(Debug, PartialEq, Eq)]
pub struct SchreyerFrame {
    pub base: FreeModuleRef,
    pub lead: Vec<Monomial>,
    pub base_comp: Vec<usize>,
    pub chain: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Degree (monomial degree plus twist), then the ring order, then the
    /// component index (larger index is larger).
    Top,
    Schreyer(Arc<SchreyerFrame>),
    /// Components below `split` dominate every component at or above it;
    /// within each block the `Top` order applies.
    BlockPot { split: usize },
}

#[derive(Debug, PartialEq, Eq)]
pub struct FreeModule {
    ring: RingRef,
    twists: Vec<i64>,
    order: ModuleOrder,
}

pub type FreeModuleRef = Arc<FreeModule>;

impl FreeModule {
    /// Free module with basis degrees `twists` (so `e_i` has degree `twists[i]`).
    pub fn new(ring: &RingRef, twists: Vec<i64>) -> FreeModuleRef {
        Arc::new(FreeModule { ring: ring.clone(), twists, order: ModuleOrder::Top })
    }

    pub fn with_order(ring: &RingRef, twists: Vec<i64>, order: ModuleOrder) -> FreeModuleRef {
        Arc::new(FreeModule { ring: ring.clone(), twists, order })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn twist(&self, c: usize) -> i64 {
        self.twists[c]
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn same(a: &FreeModuleRef, b: &FreeModuleRef) -> bool {
        Arc::ptr_eq(a, b) || (Ring::same(&a.ring, &b.ring) && a.twists == b.twists && a.order == b.order)
    }

    fn top_cmp(&self, m1: &Monomial, c1: usize, m2: &Monomial, c2: usize) -> Ordering {
        let graded = matches!(self.ring.order(), MonomialOrder::Grevlex);
        let by_degree = if graded {
            (m1.deg() + self.twists[c1]).cmp(&(m2.deg() + self.twists[c2]))
        } else {
            Ordering::Equal
        };
        by_degree.then_with(|| self.ring.cmp(m1, m2)).then(c1.cmp(&c2))
    }

    /// Compares the module monomials `m1 e_{c1}` and `m2 e_{c2}`.
    pub fn cmp(&self, m1: &Monomial, c1: usize, m2: &Monomial, c2: usize) -> Ordering {
        match &self.order {
            ModuleOrder::Top => self.top_cmp(m1, c1, m2, c2),
            ModuleOrder::BlockPot { split } => {
                let b1 = c1 < *split;
                let b2 = c2 < *split;
                b1.cmp(&b2).then_with(|| self.top_cmp(m1, c1, m2, c2))
            }
            ModuleOrder::Schreyer(frame) => {
                let t1 = m1.mul(&frame.lead[c1]);
                let t2 = m2.mul(&frame.lead[c2]);
                frame
                    .base
                    .cmp(&t1, frame.base_comp[c1], &t2, frame.base_comp[c2])
                    .then_with(|| frame.chain[c1].cmp(&frame.chain[c2]))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VTerm {
    pub mon: Monomial,
    pub comp: usize,
    pub coeff: Coeff,
}

/// An element of a free module, terms strictly descending in the module order.
#[derive(Clone, Debug)]
pub struct Vector {
    module: FreeModuleRef,
    terms: Vec<VTerm>,
}

impl PartialEq for Vector {
    fn eq(&self, other: &Self) -> bool {
        FreeModule::same(&self.module, &other.module) && self.terms == other.terms
    }
}

impl Eq for Vector {}

impl Vector {
    pub fn zero(module: &FreeModuleRef) -> Self {
        Vector { module: module.clone(), terms: Vec::new() }
    }

    pub fn basis(module: &FreeModuleRef, c: usize) -> Self {
        let ring = module.ring();
        Vector {
            module: module.clone(),
            terms: vec![VTerm { mon: ring.one(), comp: c, coeff: ring.field().one() }],
        }
    }

    pub fn from_terms(module: &FreeModuleRef, mut terms: Vec<VTerm>) -> Self {
        terms.sort_by(|a, b| module.cmp(&b.mon, b.comp, &a.mon, a.comp));
        let field = module.ring().field();
        let mut out: Vec<VTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mon == t.mon && last.comp == t.comp => {
                    last.coeff = field.add(&last.coeff, &t.coeff);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Vector { module: module.clone(), terms: out }
    }

    pub fn from_polys(module: &FreeModuleRef, entries: &[Polynomial]) -> Result<Self> {
        if entries.len() != module.rank() {
            return Err(Error::ModuleMismatch);
        }
        let mut terms = Vec::new();
        for (c, p) in entries.iter().enumerate() {
            if !Ring::same(p.ring(), module.ring()) {
                return Err(Error::RingMismatch);
            }
            for t in p.terms() {
                terms.push(VTerm { mon: t.mon.clone(), comp: c, coeff: t.coeff.clone() });
            }
        }
        Ok(Self::from_terms(module, terms))
    }

    pub fn from_poly(module: &FreeModuleRef, p: &Polynomial) -> Result<Self> {
        Self::from_polys(module, std::slice::from_ref(p))
    }

    /// Reinterprets the same terms in another free module of equal rank.
    pub fn rebase(&self, module: &FreeModuleRef) -> Self {
        Self::from_terms(module, self.terms.clone())
    }

    pub fn to_polys(&self) -> Vec<Polynomial> {
        let ring = self.module.ring();
        let mut comps: Vec<Vec<Term>> = vec![Vec::new(); self.module.rank()];
        for t in &self.terms {
            comps[t.comp].push(Term { mon: t.mon.clone(), coeff: t.coeff.clone() });
        }
        comps.into_iter().map(|ts| Polynomial::from_terms(ring, ts)).collect()
    }

    pub fn component(&self, c: usize) -> Polynomial {
        let ring = self.module.ring();
        let ts = self
            .terms
            .iter()
            .filter(|t| t.comp == c)
            .map(|t| Term { mon: t.mon.clone(), coeff: t.coeff.clone() })
            .collect();
        Polynomial::from_terms(ring, ts)
    }

    pub fn module(&self) -> &FreeModuleRef {
        &self.module
    }

    pub fn ring(&self) -> &RingRef {
        self.module.ring()
    }

    pub fn terms(&self) -> &[VTerm] {
        &self.terms
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

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    /// Degree of the term `m e_c`.
    pub fn term_degree(&self, t: &VTerm) -> i64 {
        t.mon.deg() + self.module.twist(t.comp)
    }

    /// Common degree when homogeneous; `None` for zero or inhomogeneous.
    pub fn degree(&self) -> Option<i64> {
        let first = self.terms.first()?;
        let d = self.term_degree(first);
        self.terms.iter().all(|t| self.term_degree(t) == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    fn check(&self, other: &Vector) -> Result<()> {
        if FreeModule::same(&self.module, &other.module) {
            Ok(())
        } else {
            Err(Error::ModuleMismatch)
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check(other)?;
        Ok(self.axpy(&self.module.ring().field().one(), other))
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check(other)?;
        let field = self.module.ring().field();
        Ok(self.axpy(&field.neg(&field.one()), other))
    }

    /// `self + c * other`, assuming both live in the same module.
    pub(crate) fn axpy(&self, c: &Coeff, other: &Vector) -> Vector {
        let field = self.module.ring().field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match self.module.cmp(&a[i].mon, a[i].comp, &b[j].mon, b[j].comp) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(VTerm {
                        mon: b[j].mon.clone(),
                        comp: b[j].comp,
                        coeff: field.mul(c, &b[j].coeff),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let s = field.add(&a[i].coeff, &field.mul(c, &b[j].coeff));
                    if !s.is_zero() {
                        out.push(VTerm { mon: a[i].mon.clone(), comp: a[i].comp, coeff: s });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| VTerm {
            mon: t.mon.clone(),
            comp: t.comp,
            coeff: field.mul(c, &t.coeff),
        }));
        Vector { module: self.module.clone(), terms: out }
    }

    pub fn scale(&self, c: &Coeff) -> Vector {
        self.mul_term(&self.ring().one(), c)
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Vector {
        if c.is_zero() {
            return Vector::zero(&self.module);
        }
        let field = self.module.ring().field();
        let terms = self
            .terms
            .iter()
            .map(|t| VTerm { mon: t.mon.mul(m), comp: t.comp, coeff: field.mul(&t.coeff, c) })
            .collect();
        Vector { module: self.module.clone(), terms }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Vector {
        let mut acc = Vector::zero(&self.module);
        let one = self.ring().field().one();
        for t in p.terms() {
            acc = acc.axpy(&one, &self.mul_term(&t.mon, &t.coeff));
        }
        acc
    }

    pub fn monic(&self) -> Vector {
        match self.terms.first() {
            None => self.clone(),
            Some(t) => self.scale(&self.ring().field().inv(&t.coeff)),
        }
    }

    /// Drops the terms in components `>= split`, keeping the rest in place.
    pub fn truncate_components(&self, module: &FreeModuleRef, split: usize) -> Vector {
        Vector::from_terms(module, self.terms.iter().filter(|t| t.comp < split).cloned().collect())
    }

    /// Maps components `c >= offset` to `c - offset` in `module`, dropping the rest.
    pub fn shift_components(&self, module: &FreeModuleRef, offset: usize) -> Vector {
        Vector::from_terms(
            module,
            self.terms
                .iter()
                .filter(|t| t.comp >= offset)
                .map(|t| VTerm { mon: t.mon.clone(), comp: t.comp - offset, coeff: t.coeff.clone() })
                .collect(),
        )
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.to_polys().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}
