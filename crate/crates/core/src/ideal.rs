//! Submodules of graded free modules and the algebra of ideals.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::groebner::{syzygies_unchecked, GroebnerBasis};
use crate::hilbert::{monomial_numerator, HilbertSeries};
use crate::module::{FreeModule, FreeModuleRef, VTerm, Vector};
use crate::poly::Polynomial;
use crate::ring::{Exp, Ring, RingRef};

/// A finitely generated submodule `U` of a free module `F`. Most invariants
/// refer to the quotient `F / U`; ideals are the rank-one case.
#[derive(Clone, Debug)]
pub struct Submodule {
    ambient: FreeModuleRef,
    gens: Vec<Vector>,
    gb: OnceLock<GroebnerBasis>,
}

/// Lowest and (for finite length) highest nonzero degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradedWindow {
    pub indeg: Option<i64>,
    pub end: Option<i64>,
}

impl Submodule {
    pub fn new(ambient: &FreeModuleRef, gens: Vec<Vector>) -> Result<Self> {
        for g in &gens {
            if !FreeModule::same(g.module(), ambient) {
                return Err(Error::ModuleMismatch);
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Submodule { ambient: ambient.clone(), gens, gb: OnceLock::new() })
    }

    pub fn ideal(ring: &RingRef, gens: &[Polynomial]) -> Result<Self> {
        let f = FreeModule::new(ring, vec![0]);
        let vs = gens.iter().map(|g| Vector::from_poly(&f, g)).collect::<Result<Vec<_>>>()?;
        Self::new(&f, vs)
    }

    pub fn unit_ideal(ring: &RingRef) -> Self {
        Self::ideal(ring, &[Polynomial::one(ring)]).expect("unit ideal")
    }

    pub fn zero(ambient: &FreeModuleRef) -> Self {
        Submodule { ambient: ambient.clone(), gens: Vec::new(), gb: OnceLock::new() }
    }

    /// The irrelevant ideal generated by the positive-weight variables.
    pub fn irrelevant(ring: &RingRef) -> Self {
        let gens: Vec<Polynomial> = ring.positive_vars().into_iter().map(|i| Polynomial::var(ring, i)).collect();
        Self::ideal(ring, &gens).expect("irrelevant ideal")
    }

    pub fn ambient(&self) -> &FreeModuleRef {
        &self.ambient
    }

    pub fn ring(&self) -> &RingRef {
        self.ambient.ring()
    }

    pub fn gens(&self) -> &[Vector] {
        &self.gens
    }

    pub fn is_ideal(&self) -> bool {
        self.ambient.rank() == 1
    }

    /// Generators as polynomials (rank-one only).
    pub fn polys(&self) -> Result<Vec<Polynomial>> {
        if !self.is_ideal() {
            return Err(Error::InvalidArgument("expected an ideal".into()));
        }
        Ok(self.gens.iter().map(|v| v.component(0)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn require_homogeneous(&self) -> Result<()> {
        match self.gens.iter().find(|g| !g.is_homogeneous()) {
            Some(g) => Err(Error::Inhomogeneous(g.to_string())),
            None => Ok(()),
        }
    }

    pub fn gb(&self) -> Result<&GroebnerBasis> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = GroebnerBasis::compute(&self.ambient, &self.gens)?;
        let _ = self.gb.set(g);
        Ok(self.gb.get().unwrap())
    }

    /// Submodule generated by the reduced Gröbner basis.
    pub fn reduced(&self) -> Result<Submodule> {
        let gb = self.gb()?.clone();
        let s = Submodule { ambient: self.ambient.clone(), gens: gb.elements().to_vec(), gb: OnceLock::new() };
        let _ = s.gb.set(gb);
        Ok(s)
    }

    fn same_ambient(&self, other: &Submodule) -> Result<()> {
        if !Ring::same(self.ring(), other.ring()) {
            return Err(Error::RingMismatch);
        }
        if !FreeModule::same(&self.ambient, &other.ambient) {
            return Err(Error::ModuleMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        self.gb()?.contains(v)
    }

    pub fn contains_poly(&self, p: &Polynomial) -> Result<bool> {
        self.contains(&Vector::from_poly(&self.ambient, p)?)
    }

    pub fn is_subset_of(&self, other: &Submodule) -> Result<bool> {
        self.same_ambient(other)?;
        for g in &self.gens {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Submodule) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.is_unit())
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.same_ambient(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::new(&self.ambient, gens)
    }

    /// `I * N` for an ideal `I` (self) and a submodule `N`.
    pub fn product(&self, other: &Submodule) -> Result<Submodule> {
        if !self.is_ideal() {
            return Err(Error::InvalidArgument("left factor of a product must be an ideal".into()));
        }
        if !Ring::same(self.ring(), other.ring()) {
            return Err(Error::RingMismatch);
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for f in &self.gens {
            let f = f.component(0);
            for v in &other.gens {
                gens.push(v.mul_poly(&f));
            }
        }
        Submodule::new(&other.ambient, gens)?.reduced()
    }

    /// `I^t`, interreducing after every multiplication; `I^0 = (1)`.
    pub fn power(&self, t: i64) -> Result<Submodule> {
        if !self.is_ideal() {
            return Err(Error::InvalidArgument("powers are defined for ideals".into()));
        }
        if t < 0 {
            return Err(Error::InvalidArgument("negative exponent".into()));
        }
        let mut acc = Submodule::new(&self.ambient, vec![Vector::basis(&self.ambient, 0)])?;
        for _ in 0..t {
            acc = self.product(&acc)?;
        }
        Ok(acc)
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Submodule::zero(&self.ambient));
        }
        if self.is_ideal() {
            return self.intersect_ideals(other);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        let (_, syz) = syzygies_unchecked(&self.ambient, &gens)?;
        let p = self.gens.len();
        let mut out = Vec::new();
        for s in &syz {
            let coeffs = s.to_polys();
            let mut acc = Vector::zero(&self.ambient);
            for (i, c) in coeffs.iter().take(p).enumerate() {
                acc = acc.add(&self.gens[i].mul_poly(c))?;
            }
            out.push(acc);
        }
        Submodule::new(&self.ambient, out)?.reduced()
    }

    /// `I ∩ J` as `(t I + (1 - t) J) ∩ k[x]`.
    fn intersect_ideals(&self, other: &Submodule) -> Result<Submodule> {
        let ring = self.ring();
        let mut names = vec!["_t".to_string()];
        names.extend(ring.names().iter().cloned());
        let mut weights = vec![1];
        weights.extend(ring.weights());
        let mut tweights = vec![0];
        tweights.extend(ring.tweights());
        let mut mask = vec![false; names.len()];
        mask[0] = true;
        let big = Ring::with_bigrading(
            ring.field().clone(),
            names,
            weights,
            tweights,
            crate::ring::MonomialOrder::Elimination(mask),
            false,
        )?;
        let t = Polynomial::var(&big, 0);
        let one_minus_t = Polynomial::one(&big).sub(&t)?;
        let mut gens = Vec::new();
        for f in self.polys()? {
            gens.push(t.mul(&f.embed(&big)?)?);
        }
        for g in other.polys()? {
            gens.push(one_minus_t.mul(&g.embed(&big)?)?);
        }
        let gb = crate::groebner::ideal_basis_polys(&big, &gens)?;
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter(|g| g.terms().iter().all(|t| t.mon.exp(0) == 0))
            .map(|g| g.restrict(ring))
            .collect::<Result<_>>()?;
        Submodule::ideal(ring, &kept)?.reduced()
    }

    /// `{ v : f v ∈ U }`.
    pub fn colon_element(&self, f: &Polynomial) -> Result<Submodule> {
        if !Ring::same(f.ring(), self.ring()) {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Submodule::new(&self.ambient, (0..self.ambient.rank()).map(|c| Vector::basis(&self.ambient, c)).collect());
        }
        let r = self.ambient.rank();
        let mut gens: Vec<Vector> = (0..r).map(|c| Vector::basis(&self.ambient, c).mul_poly(f)).collect();
        gens.extend(self.gb()?.elements().iter().cloned());
        let (_, syz) = syzygies_unchecked(&self.ambient, &gens)?;
        let out: Vec<Vector> = syz
            .iter()
            .map(|s| {
                let terms: Vec<VTerm> = s.terms().iter().filter(|t| t.comp < r).cloned().collect();
                Vector::from_terms(&self.ambient, terms)
            })
            .filter(|v| !v.is_zero())
            .collect();
        Submodule::new(&self.ambient, out)?.reduced()
    }

    /// `U : J = ∩_k (U : f_k)`.
    pub fn colon(&self, j: &Submodule) -> Result<Submodule> {
        if !j.is_ideal() {
            return Err(Error::InvalidArgument("colon by a non-ideal".into()));
        }
        if !Ring::same(self.ring(), j.ring()) {
            return Err(Error::RingMismatch);
        }
        let fs = j.gb()?.elements().iter().map(|v| v.component(0)).collect::<Vec<_>>();
        if fs.is_empty() {
            return Err(Error::InvalidArgument("colon by the zero ideal".into()));
        }
        let mut acc: Option<Submodule> = None;
        for f in &fs {
            let c = self.colon_element(f)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        acc.unwrap().reduced()
    }

    /// `U : J^∞` by iterated colon until the basis stabilizes.
    pub fn saturate(&self, j: &Submodule) -> Result<Submodule> {
        let mut cur = self.reduced()?;
        loop {
            crate::budget::check()?;
            let next = cur.colon(j)?;
            if next.is_subset_of(&cur)? {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// Saturation with respect to the irrelevant ideal.
    pub fn saturate_irrelevant(&self) -> Result<Submodule> {
        self.saturate(&Submodule::irrelevant(self.ring()))
    }

    /// A minimal homogeneous generating set, lowest degrees first.
    pub fn minimal_generators(&self) -> Result<Vec<Vector>> {
        self.require_homogeneous()?;
        let mut cand = self.gens.clone();
        cand.sort_by_key(|g| g.degree().unwrap());
        let mut chosen: Vec<Vector> = Vec::new();
        let mut gb = GroebnerBasis::compute(&self.ambient, &[])?;
        for g in cand {
            if !gb.contains(&g)? {
                chosen.push(g);
                gb = GroebnerBasis::compute(&self.ambient, &chosen)?;
            }
        }
        Ok(chosen)
    }

    /// Degrees of a minimal generating set.
    pub fn generator_degrees(&self) -> Result<Vec<i64>> {
        Ok(self.minimal_generators()?.iter().map(|g| g.degree().unwrap()).collect())
    }

    /// The submodule generated by the elements of degree at most `mu`.
    pub fn truncate_below(&self, mu: i64) -> Result<Submodule> {
        let gens = self.minimal_generators()?.into_iter().filter(|g| g.degree().unwrap() <= mu).collect();
        Submodule::new(&self.ambient, gens)
    }

    /// `ann(F / U) = ∩_i (U : e_i)`.
    pub fn annihilator(&self) -> Result<Submodule> {
        let ring = self.ring().clone();
        let r = self.ambient.rank();
        let mut acc: Option<Submodule> = None;
        for c in 0..r {
            let mut gens = vec![Vector::basis(&self.ambient, c)];
            gens.extend(self.gb()?.elements().iter().cloned());
            let (_, syz) = syzygies_unchecked(&self.ambient, &gens)?;
            let polys: Vec<Polynomial> =
                syz.iter().map(|s| s.component(0)).filter(|p| !p.is_zero()).collect();
            let ideal = Submodule::ideal(&ring, &polys)?;
            acc = Some(match acc {
                None => ideal,
                Some(a) => a.intersect(&ideal)?,
            });
        }
        match acc {
            Some(a) => a.reduced(),
            None => Ok(Submodule::unit_ideal(&ring)),
        }
    }

    /// Hilbert series of `F / U`.
    pub fn quotient_series(&self) -> Result<HilbertSeries> {
        self.require_homogeneous()?;
        let weights = HilbertSeries::ring_weights(self.ring())?;
        let leads = self.gb()?.lead_monomials();
        let mut total = HilbertSeries::zero(weights.clone());
        for (c, ms) in leads.iter().enumerate() {
            let gens: Vec<Vec<Exp>> = ms.iter().map(|m| m.exps().to_vec()).collect();
            let num = monomial_numerator(&weights, &gens);
            let part = HilbertSeries::new(weights.clone(), num).shift(self.ambient.twist(c));
            total = total.add(&part)?;
        }
        Ok(total)
    }

    /// Hilbert series of `U` itself.
    pub fn series(&self) -> Result<HilbertSeries> {
        let weights = HilbertSeries::ring_weights(self.ring())?;
        HilbertSeries::free(weights, self.ambient.twists()).sub(&self.quotient_series()?)
    }

    /// Krull dimension of `F / U` from maximal independent sets of the
    /// initial module; `-1` for the zero module.
    pub fn quotient_dimension(&self) -> Result<i64> {
        let leads = self.gb()?.lead_monomials();
        let nv = self.ring().nvars();
        let mut best = -1i64;
        for ms in &leads {
            best = best.max(independent_dimension(nv, ms.iter().map(|m| m.exps()).collect()));
        }
        Ok(best)
    }

    pub fn graded_window(&self) -> Result<GradedWindow> {
        let hs = self.quotient_series()?;
        let end = if hs.is_zero() { None } else { hs.end()? };
        Ok(GradedWindow { indeg: hs.indeg(), end })
    }

    /// Applies a ring map to every generator, landing in a free module of
    /// the same twists over `target`.
    pub fn map(&self, target: &RingRef, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Submodule> {
        let amb = FreeModule::new(target, self.ambient.twists().to_vec());
        let gens = self
            .gens
            .iter()
            .map(|v| v.to_polys().iter().map(&f).collect::<Result<Vec<_>>>().and_then(|ps| Vector::from_polys(&amb, &ps)))
            .collect::<Result<Vec<_>>>()?;
        Submodule::new(&amb, gens)
    }

    /// Presentation `F' / Syz` of `U` as an abstract module, `F'` having
    /// the generator degrees as twists.
    pub fn as_quotient(&self) -> Result<Submodule> {
        self.require_homogeneous()?;
        let gens = self.minimal_generators()?;
        let (src, syz) = syzygies_unchecked(&self.ambient, &gens)?;
        Submodule::new(&src, syz)
    }
}

impl Submodule {
    /// `J F` for an ideal `J` and the free module `F`.
    pub fn map_into(&self, ambient: &FreeModuleRef) -> Result<Submodule> {
        let polys = self.polys()?;
        let mut gens = Vec::new();
        for c in 0..ambient.rank() {
            for p in &polys {
                gens.push(Vector::basis(ambient, c).mul_poly(p));
            }
        }
        Submodule::new(ambient, gens)
    }
}

/// Largest number of variables carrying no leading monomial entirely.
fn independent_dimension(nv: usize, gens: Vec<&[Exp]>) -> i64 {
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return -1;
    }
    // depth-first search over supports, pruning by bound
    let supports: Vec<u64> = gens
        .iter()
        .map(|g| g.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |m, (i, _)| m | (1 << i)))
        .collect();
    fn rec(v: usize, nv: usize, chosen: u64, supports: &[u64], best: &mut i64) {
        let count = chosen.count_ones() as i64;
        if count + (nv - v) as i64 <= *best {
            return;
        }
        if v == nv {
            *best = count;
            return;
        }
        let with = chosen | (1 << v);
        if !supports.iter().any(|s| s & !with == 0) {
            rec(v + 1, nv, with, supports, best);
        }
        rec(v + 1, nv, chosen, supports, best);
    }
    let mut best = -1;
    rec(0, nv, 0, &supports, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::parse::parse_polynomial;
    use proptest::prelude::*;

    fn ring2() -> RingRef {
        Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap()
    }

    fn ring3() -> RingRef {
        Ring::standard(Field::Prime(32003), &["x", "y", "z"]).unwrap()
    }

    fn ideal(r: &RingRef, s: &[&str]) -> Submodule {
        let ps: Vec<Polynomial> = s.iter().map(|x| parse_polynomial(r, x).unwrap()).collect();
        Submodule::ideal(r, &ps).unwrap()
    }

    fn strs(s: &Submodule) -> Vec<String> {
        s.reduced().unwrap().polys().unwrap().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn square_of_maximal_ideal() {
        let r = ring2();
        let p = ideal(&r, &["x", "y"]).power(2).unwrap();
        assert!(p.equals(&ideal(&r, &["x^2", "x*y", "y^2"])).unwrap());
    }

    #[test]
    fn cube_of_two_squares() {
        let r = ring2();
        let p = ideal(&r, &["x^2", "y^2"]).power(3).unwrap();
        assert_eq!(p.gens().len(), 4);
        assert!(p.equals(&ideal(&r, &["x^6", "x^4*y^2", "x^2*y^4", "y^6"])).unwrap());
    }

    #[test]
    fn zeroth_power_is_unit() {
        let r = ring2();
        assert!(ideal(&r, &["x^2", "y"]).power(0).unwrap().is_unit().unwrap());
        assert!(ideal(&r, &["x"]).power(-1).is_err());
    }

    #[test]
    fn intersection_membership_both_ways() {
        let r = ring2();
        let i = ideal(&r, &["x^2", "y^2"]).intersect(&ideal(&r, &["x"])).unwrap();
        assert!(i.equals(&ideal(&r, &["x^2", "x*y^2"])).unwrap());
    }

    #[test]
    fn module_intersection_via_syzygies() {
        let r = ring2();
        let f = FreeModule::new(&r, vec![0, 0]);
        let v = |a: &str, b: &str| {
            Vector::from_polys(&f, &[parse_polynomial(&r, a).unwrap(), parse_polynomial(&r, b).unwrap()]).unwrap()
        };
        let a = Submodule::new(&f, vec![v("x", "0"), v("0", "y")]).unwrap();
        let b = Submodule::new(&f, vec![v("y", "y")]).unwrap();
        let c = a.intersect(&b).unwrap();
        let expect = Submodule::new(&f, vec![v("x*y", "x*y")]).unwrap();
        assert!(c.equals(&expect).unwrap());
    }

    #[test]
    fn colon_and_saturation() {
        let r = ring2();
        let c = ideal(&r, &["x^2*y"]).colon(&ideal(&r, &["y"])).unwrap();
        assert_eq!(strs(&c), vec!["x^2"]);
        let s = ideal(&r, &["x^2", "x*y"]).saturate(&ideal(&r, &["x", "y"])).unwrap();
        assert_eq!(strs(&s), vec!["x"]);
        let r3 = ring3();
        let i = ideal(&r3, &["x^2", "y^2"]);
        assert!(i.saturate_irrelevant().unwrap().equals(&i).unwrap());
    }

    #[test]
    fn truncations() {
        let r = ring2();
        let i = ideal(&r, &["x^3", "x^2*y", "y^5"]);
        assert!(i.truncate_below(3).unwrap().equals(&ideal(&r, &["x^3", "x^2*y"])).unwrap());
        assert!(i.truncate_below(5).unwrap().equals(&i).unwrap());
        assert!(ideal(&r, &["x^2", "x*y", "y^2"]).truncate_below(1).unwrap().is_zero());
    }

    #[test]
    fn annihilators() {
        let r = ring2();
        let f = parse_polynomial(&r, "x^2+x*y").unwrap();
        let a = Submodule::ideal(&r, std::slice::from_ref(&f)).unwrap().annihilator().unwrap();
        assert!(a.equals(&Submodule::ideal(&r, &[f]).unwrap()).unwrap());
        let free = FreeModule::new(&r, vec![0, 0]);
        let x = parse_polynomial(&r, "x").unwrap();
        let m = Submodule::new(&free, vec![Vector::from_polys(&free, &[Polynomial::zero(&r), x.clone()]).unwrap()]).unwrap();
        assert!(m.annihilator().unwrap().is_zero() || m.annihilator().unwrap().gb().unwrap().is_empty());
        // coker [[x, y], [0, x]]
        let col = |a: &str, b: &str| {
            Vector::from_polys(&free, &[parse_polynomial(&r, a).unwrap(), parse_polynomial(&r, b).unwrap()]).unwrap()
        };
        let m = Submodule::new(&free, vec![col("x", "0"), col("y", "x")]).unwrap();
        let a = m.annihilator().unwrap();
        // x^2 e_2 = -x (y, x) + y (x, 0) ... kills e_2, while x y e_2 is not in the image
        assert!(a.contains_poly(&parse_polynomial(&r, "x^2").unwrap()).unwrap());
        assert!(!a.contains_poly(&parse_polynomial(&r, "x*y").unwrap()).unwrap());
        assert!(a.equals(&ideal(&r, &["x^2"])).unwrap());
    }

    #[test]
    fn dimensions_and_series() {
        let r = ring3();
        let i = ideal(&r, &["x^2", "y^2"]);
        assert_eq!(i.quotient_dimension().unwrap(), 1);
        let hs = i.quotient_series().unwrap();
        assert_eq!(hs.dimension(), 1);
        assert_eq!(hs.hilbert_polynomial().unwrap().to_string(), "4");
        let names = ["a", "x", "y"].iter().map(|s| s.to_string()).collect();
        let s = Ring::new(Field::Prime(7), names, vec![0, 1, 1], crate::ring::MonomialOrder::Grevlex, false).unwrap();
        assert_eq!(Submodule::zero(&FreeModule::new(&s, vec![0])).quotient_dimension().unwrap(), 3);
        let plane = Submodule::zero(&FreeModule::new(&ring2(), vec![0])).quotient_series().unwrap();
        assert_eq!(plane, HilbertSeries::free(vec![1, 1], &[0]));
    }

    #[test]
    fn windows() {
        let r = ring2();
        assert_eq!(ideal(&r, &["x^2", "x*y", "y^3"]).series().unwrap().indeg(), Some(2));
        let w = ideal(&r, &["x^2", "x*y", "y^2"]).graded_window().unwrap();
        assert_eq!(w, GradedWindow { indeg: Some(0), end: Some(1) });
        assert_eq!(ideal(&r, &["x"]).graded_window(), Err(Error::InfiniteLength));
        // I^t / m I^t for I = m^2 ends in degree 2t
        let m = ideal(&r, &["x", "y"]);
        let i = ideal(&r, &["x^2", "x*y", "y^2"]);
        for t in 1..4 {
            let it = i.power(t).unwrap();
            let q = it.as_quotient().unwrap();
            let mq = q.sum(&m.map_into(q.ambient()).unwrap()).unwrap();
            assert_eq!(mq.graded_window().unwrap().end, Some(2 * t));
        }
    }

    fn random_ideal() -> impl Strategy<Value = Vec<Vec<(i64, Vec<u32>)>>> {
        proptest::collection::vec(
            proptest::collection::vec((1i64..50, proptest::collection::vec(0u32..3, 2)), 1..3),
            1..3,
        )
    }

    fn build(r: &RingRef, raw: &[Vec<(i64, Vec<u32>)>]) -> Submodule {
        let ps: Vec<Polynomial> = raw
            .iter()
            .map(|terms| {
                // homogenize by padding the first variable up to the top degree
                let top = terms.iter().map(|(_, e)| e.iter().sum::<u32>()).max().unwrap();
                let ts = terms
                    .iter()
                    .map(|(c, e)| {
                        let s: u32 = e.iter().sum();
                        crate::poly::Term { mon: r.monomial_from(&[e[0] + top - s, e[1]]), coeff: r.field().from_i64(*c) }
                    })
                    .collect();
                Polynomial::from_terms(r, ts)
            })
            .filter(|p| !p.is_zero())
            .collect();
        Submodule::ideal(r, &ps).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn saturation_laws(raw in random_ideal()) {
            let r = ring2();
            let a = build(&r, &raw);
            let j = ideal(&r, &["x", "y"]);
            let c = a.colon(&j).unwrap();
            let s = a.saturate(&j).unwrap();
            prop_assert!(a.is_subset_of(&c).unwrap());
            prop_assert!(c.is_subset_of(&s).unwrap());
            prop_assert!(s.saturate(&j).unwrap().equals(&s).unwrap());
        }

        #[test]
        fn power_is_repeated_product(raw in random_ideal(), t in 1i64..4) {
            let r = ring2();
            let a = build(&r, &raw);
            let mut prod = a.clone();
            for _ in 1..t {
                let gens: Vec<Vector> = prod
                    .gens()
                    .iter()
                    .flat_map(|v| a.gens().iter().map(move |w| v.mul_poly(&w.component(0))))
                    .collect();
                prod = Submodule::new(a.ambient(), gens).unwrap();
            }
            prop_assert!(a.power(t).unwrap().equals(&prod).unwrap());
        }

        #[test]
        fn kodiyalam_bound_for_equigenerated(raw in proptest::collection::vec(proptest::collection::vec(0u32..4, 1), 1..4), t in 1i64..4) {
            // forms of degree 3 in k[x, y] given by their x-exponent
            let r = ring2();
            let ps: Vec<Polynomial> = raw.iter().map(|e| Polynomial::term(&r, r.monomial_from(&[e[0], 3 - e[0]]), r.field().one())).collect();
            let i = Submodule::ideal(&r, &ps).unwrap();
            let q = i.power(t).unwrap().as_quotient().unwrap();
            let m = ideal(&r, &["x", "y"]);
            let w = q.sum(&m.map_into(q.ambient()).unwrap()).unwrap().graded_window().unwrap();
            prop_assert!(w.end.unwrap() >= 3 * t);
        }
    }
}
