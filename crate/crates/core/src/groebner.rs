//! Buchberger's algorithm for submodules of free modules.
//!
//! Pairs are processed by sugar degree; the Gebauer–Möller criteria prune
//! redundant pairs and the coprime-leading-term criterion is applied to
//! ideals. Results are reduced, monic and sorted by leading term.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::budget;
use crate::error::{Error, Result};
use crate::module::{FreeModule, FreeModuleRef, ModuleOrder, VTerm, Vector};
use crate::poly::Polynomial;
use crate::ring::{Monomial, MonomialOrder, MonomialDisplay, Ring, RingRef};

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    module: FreeModuleRef,
    elems: Vec<Vector>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        FreeModule::same(&self.module, &other.module) && self.elems == other.elems
    }
}

impl Eq for GroebnerBasis {}

#[derive(Default, Clone, Debug)]
pub struct GbOptions {
    /// Record one line per processed pair.
    pub trace: bool,
}

fn sugar_weight(ring: &Ring, i: usize) -> i64 {
    match ring.weight(i) {
        0 => 1,
        w => w as i64,
    }
}

fn sugar_degree(ring: &Ring, m: &Monomial) -> i64 {
    m.exps().iter().enumerate().map(|(i, &e)| e as i64 * sugar_weight(ring, i)).sum()
}

fn vector_sugar(v: &Vector) -> i64 {
    let ring = v.ring();
    v.terms()
        .iter()
        .map(|t| sugar_degree(ring, &t.mon) + v.module().twist(t.comp))
        .max()
        .unwrap_or(0)
}

struct Elem {
    v: Vector,
    lead: Monomial,
    comp: usize,
    mask: u64,
    sugar: i64,
    active: bool,
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reducer set used for normal forms during and after the computation.
struct Reducers<'a> {
    elems: &'a [Elem],
}

impl Reducers<'_> {
    fn find(&self, t: &VTerm) -> Option<usize> {
        let mask = t.mon.divmask();
        let mut best: Option<usize> = None;
        for (k, e) in self.elems.iter().enumerate() {
            if !e.active || e.comp != t.comp || e.mask & !mask != 0 || !e.lead.divides(&t.mon) {
                continue;
            }
            match best {
                Some(b) if self.elems[b].v.len() <= e.v.len() => {}
                _ => best = Some(k),
            }
        }
        best
    }
}

/// Fully reduces `v` by the active elements.
fn reduce_full(v: Vector, red: &Reducers<'_>) -> Result<Vector> {
    let module = v.module().clone();
    let field = module.ring().field().clone();
    let mut rest = v;
    let mut done: Vec<VTerm> = Vec::new();
    let mut steps = 0usize;
    while let Some(t) = rest.lead().cloned() {
        steps += 1;
        if steps.is_multiple_of(64) {
            budget::check()?;
        }
        match red.find(&t) {
            Some(k) => {
                let e = &red.elems[k];
                let q = e.lead.quotient_of(&t.mon).expect("divisor");
                let c = field.neg(&field.div(&t.coeff, &e.v.lead().unwrap().coeff));
                rest = rest.axpy(&field.one(), &e.v.mul_term(&q, &c));
            }
            None => {
                done.push(t);
                rest = Vector::from_terms(&module, rest.terms()[1..].to_vec());
            }
        }
    }
    Ok(Vector::from_terms(&module, done))
}

impl GroebnerBasis {
    pub fn compute(module: &FreeModuleRef, gens: &[Vector]) -> Result<GroebnerBasis> {
        Self::compute_with(module, gens, &GbOptions::default()).map(|(g, _)| g)
    }

    /// Runs Buchberger and returns the basis together with a pair trace when requested.
    pub fn compute_with(
        module: &FreeModuleRef,
        gens: &[Vector],
        opts: &GbOptions,
    ) -> Result<(GroebnerBasis, Vec<String>)> {
        for g in gens {
            if !FreeModule::same(g.module(), module) {
                return Err(Error::ModuleMismatch);
            }
        }
        let ring = module.ring().clone();
        let field = ring.field().clone();
        let product_criterion = module.rank() == 1;
        let mut elems: Vec<Elem> = Vec::new();
        let mut pairs: Vec<Option<Pair>> = Vec::new();
        let mut heap: BinaryHeap<Reverse<(i64, i64, usize)>> = BinaryHeap::new();
        let mut trace = Vec::new();

        let pair_key = |elems: &[Elem], p: &Pair| -> (i64, i64) {
            let (a, b) = (&elems[p.i], &elems[p.j]);
            let sa = a.sugar + sugar_degree(&ring, &a.lead.quotient_of(&p.lcm).unwrap());
            let sb = b.sugar + sugar_degree(&ring, &b.lead.quotient_of(&p.lcm).unwrap());
            (sa.max(sb), p.lcm.deg() + module.twist(a.comp))
        };

        // Gebauer–Möller update for a new element `k`.
        let update = |elems: &mut Vec<Elem>,
                      pairs: &mut Vec<Option<Pair>>,
                      heap: &mut BinaryHeap<Reverse<(i64, i64, usize)>>,
                      k: usize| {
            let lead_k = elems[k].lead.clone();
            let comp_k = elems[k].comp;
            // Criterion B on the existing pairs.
            for slot in pairs.iter_mut() {
                let Some(p) = slot else { continue };
                if elems[p.i].comp != comp_k || !lead_k.divides(&p.lcm) {
                    continue;
                }
                let lik = ring.lcm(&elems[p.i].lead, &lead_k);
                let ljk = ring.lcm(&elems[p.j].lead, &lead_k);
                if lik != p.lcm && ljk != p.lcm {
                    *slot = None;
                }
            }
            // New candidate pairs.
            let mut cand: Vec<(usize, Monomial, bool)> = Vec::new();
            for (i, e) in elems.iter().enumerate().take(k) {
                if !e.active || e.comp != comp_k {
                    continue;
                }
                let l = ring.lcm(&e.lead, &lead_k);
                let coprime = product_criterion && e.lead.is_coprime(&lead_k);
                cand.push((i, l, coprime));
            }
            // Criterion M: drop pairs whose lcm is a proper multiple of another's.
            let keep: Vec<bool> = cand
                .iter()
                .map(|(_, l, _)| !cand.iter().any(|(_, l2, _)| l2 != l && l2.divides(l)))
                .collect();
            let mut survivors: Vec<(usize, Monomial, bool)> =
                cand.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
            // Criterion F: one pair per lcm; the class dies if any member is coprime.
            survivors.sort_by(|a, b| ring.cmp(&a.1, &b.1).then(a.0.cmp(&b.0)));
            let mut idx = 0;
            while idx < survivors.len() {
                let mut end = idx + 1;
                while end < survivors.len() && survivors[end].1 == survivors[idx].1 {
                    end += 1;
                }
                let class = &survivors[idx..end];
                if !class.iter().any(|c| c.2) {
                    let (i, l, _) = class[0].clone();
                    let p = Pair { i, j: k, lcm: l };
                    let (s, d) = pair_key(elems, &p);
                    let seq = pairs.len();
                    pairs.push(Some(p));
                    heap.push(Reverse((s, d, seq)));
                }
                idx = end;
            }
            for i in 0..k {
                if elems[i].active && elems[i].comp == comp_k && lead_k.divides(&elems[i].lead) {
                    elems[i].active = false;
                }
            }
        };

        let add = |v: Vector,
                       elems: &mut Vec<Elem>,
                       pairs: &mut Vec<Option<Pair>>,
                       heap: &mut BinaryHeap<Reverse<(i64, i64, usize)>>| {
            let v = v.monic();
            let lt = v.lead().unwrap().clone();
            let sugar = vector_sugar(&v);
            elems.push(Elem { mask: lt.mon.divmask(), lead: lt.mon, comp: lt.comp, sugar, v, active: true });
            let k = elems.len() - 1;
            update(elems, pairs, heap, k);
        };

        let mut inputs: Vec<Vector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        inputs.sort_by(|a, b| {
            vector_sugar(a).cmp(&vector_sugar(b)).then_with(|| {
                let (x, y) = (a.lead().unwrap(), b.lead().unwrap());
                module.cmp(&x.mon, x.comp, &y.mon, y.comp)
            })
        });
        for g in inputs {
            budget::check()?;
            let r = reduce_full(g, &Reducers { elems: &elems })?;
            if !r.is_zero() {
                add(r, &mut elems, &mut pairs, &mut heap);
            }
        }

        while let Some(Reverse((sugar, _, seq))) = heap.pop() {
            budget::check()?;
            let Some(p) = pairs[seq].take() else { continue };
            let (a, b) = (&elems[p.i], &elems[p.j]);
            let qa = a.lead.quotient_of(&p.lcm).unwrap();
            let qb = b.lead.quotient_of(&p.lcm).unwrap();
            let s = a.v.mul_term(&qa, &field.one()).axpy(&field.neg(&field.one()), &b.v.mul_term(&qb, &field.one()));
            let r = reduce_full(s, &Reducers { elems: &elems })?;
            if opts.trace {
                trace.push(format!(
                    "pair ({}, {}) sugar {} lcm {}*e{} -> {}",
                    p.i,
                    p.j,
                    sugar,
                    MonomialDisplay { ring: &ring, mon: &p.lcm },
                    a.comp,
                    if r.is_zero() { "0".to_string() } else { format!("new element {}", elems.len()) }
                ));
            }
            if !r.is_zero() {
                add(r, &mut elems, &mut pairs, &mut heap);
            }
        }

        // Minimal basis, then tail reduction.
        let mut minimal: Vec<Vector> = Vec::new();
        for (k, e) in elems.iter().enumerate() {
            if !e.active {
                continue;
            }
            let redundant = elems.iter().enumerate().any(|(l, f)| {
                l != k && f.active && f.comp == e.comp && f.lead.divides(&e.lead) && (f.lead != e.lead || l < k)
            });
            if !redundant {
                minimal.push(e.v.clone());
            }
        }
        let mut reduced = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<Elem> = minimal
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .map(|(_, v)| {
                    let lt = v.lead().unwrap();
                    Elem {
                        v: v.clone(),
                        lead: lt.mon.clone(),
                        comp: lt.comp,
                        mask: lt.mon.divmask(),
                        sugar: 0,
                        active: true,
                    }
                })
                .collect();
            let v = &minimal[k];
            let lead = v.lead().unwrap().clone();
            let tail = Vector::from_terms(module, v.terms()[1..].to_vec());
            let tail = reduce_full(tail, &Reducers { elems: &others })?;
            let mut terms = vec![lead];
            terms.extend(tail.terms().iter().cloned());
            reduced.push(Vector::from_terms(module, terms).monic());
        }
        reduced.sort_by(|a, b| {
            let (x, y) = (a.lead().unwrap(), b.lead().unwrap());
            module.cmp(&x.mon, x.comp, &y.mon, y.comp)
        });
        Ok((GroebnerBasis { module: module.clone(), elems: reduced }, trace))
    }

    pub fn module(&self) -> &FreeModuleRef {
        &self.module
    }

    pub fn ring(&self) -> &RingRef {
        self.module.ring()
    }

    pub fn elements(&self) -> &[Vector] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// True when the basis generates the whole free module.
    pub fn is_unit(&self) -> bool {
        (0..self.module.rank()).all(|c| {
            self.elems.iter().any(|v| {
                let t = v.lead().unwrap();
                t.comp == c && t.mon.is_one()
            })
        })
    }

    /// Leading monomials grouped by component.
    pub fn lead_monomials(&self) -> Vec<Vec<Monomial>> {
        let mut out = vec![Vec::new(); self.module.rank()];
        for v in &self.elems {
            let t = v.lead().unwrap();
            out[t.comp].push(t.mon.clone());
        }
        out
    }

    fn as_elems(&self) -> Vec<Elem> {
        self.elems
            .iter()
            .map(|v| {
                let lt = v.lead().unwrap();
                Elem {
                    v: v.clone(),
                    lead: lt.mon.clone(),
                    comp: lt.comp,
                    mask: lt.mon.divmask(),
                    sugar: 0,
                    active: true,
                }
            })
            .collect()
    }

    pub fn normal_form(&self, v: &Vector) -> Result<Vector> {
        if !FreeModule::same(v.module(), &self.module) {
            return Err(Error::ModuleMismatch);
        }
        let elems = self.as_elems();
        reduce_full(v.clone(), &Reducers { elems: &elems })
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        Ok(self.normal_form(v)?.is_zero())
    }

    /// Re-checks Buchberger's criterion on every pair.
    pub fn verify(&self) -> Result<bool> {
        let elems = self.as_elems();
        let field = self.ring().field().clone();
        let ring = self.ring().clone();
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                if elems[i].comp != elems[j].comp {
                    continue;
                }
                let l = ring.lcm(&elems[i].lead, &elems[j].lead);
                let qa = elems[i].lead.quotient_of(&l).unwrap();
                let qb = elems[j].lead.quotient_of(&l).unwrap();
                let s = elems[i].v.mul_term(&qa, &field.one()).axpy(
                    &field.neg(&field.one()),
                    &elems[j].v.mul_term(&qb, &field.one()),
                );
                if !reduce_full(s, &Reducers { elems: &elems })?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Reduced Gröbner basis of an ideal.
pub fn ideal_basis(ring: &RingRef, gens: &[Polynomial]) -> Result<GroebnerBasis> {
    let m = FreeModule::new(ring, vec![0]);
    let vs = gens.iter().map(|g| Vector::from_poly(&m, g)).collect::<Result<Vec<_>>>()?;
    GroebnerBasis::compute(&m, &vs)
}

pub fn ideal_basis_polys(ring: &RingRef, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    Ok(ideal_basis(ring, gens)?.elements().iter().map(|v| v.component(0)).collect())
}

/// Generators of the syzygy module of `gens`, as vectors in a free module
/// whose basis degrees are the generator degrees.
pub fn syzygies(module: &FreeModuleRef, gens: &[Vector]) -> Result<(FreeModuleRef, Vec<Vector>)> {
    for g in gens {
        if !g.is_homogeneous() {
            return Err(Error::Inhomogeneous(format!("{g}")));
        }
    }
    syzygies_unchecked(module, gens)
}

pub(crate) fn syzygies_unchecked(
    module: &FreeModuleRef,
    gens: &[Vector],
) -> Result<(FreeModuleRef, Vec<Vector>)> {
    let ring = module.ring();
    let r = module.rank();
    let m = gens.len();
    let twists: Vec<i64> = gens
        .iter()
        .map(|g| match g.lead() {
            Some(t) => g.term_degree(t),
            None => 0,
        })
        .collect();
    let mut all = module.twists().to_vec();
    all.extend(&twists);
    let aug = FreeModule::with_order(ring, all, ModuleOrder::BlockPot { split: r });
    let target = FreeModule::new(ring, twists);
    let one = ring.field().one();
    let mut vs = Vec::with_capacity(m);
    for (i, g) in gens.iter().enumerate() {
        if !FreeModule::same(g.module(), module) {
            return Err(Error::ModuleMismatch);
        }
        let mut terms: Vec<VTerm> = g.terms().to_vec();
        terms.push(VTerm { mon: ring.one(), comp: r + i, coeff: one.clone() });
        vs.push(Vector::from_terms(&aug, terms));
    }
    let gb = GroebnerBasis::compute(&aug, &vs)?;
    let syz = gb
        .elements()
        .iter()
        .filter(|v| v.lead().unwrap().comp >= r)
        .map(|v| v.shift_components(&target, r))
        .collect();
    Ok((target, syz))
}

/// Kernel of the map `F' -> F / N` sending `e_i` to `columns[i]`, where `N`
/// is generated by `relations`.
pub fn kernel_of_map(
    target: &FreeModuleRef,
    columns: &[Vector],
    relations: &[Vector],
) -> Result<(FreeModuleRef, Vec<Vector>)> {
    let mut gens = columns.to_vec();
    gens.extend(relations.iter().cloned());
    let (aug, syz) = syzygies(target, &gens)?;
    let src = FreeModule::new(target.ring(), aug.twists()[..columns.len()].to_vec());
    let mut out: Vec<Vector> = syz
        .iter()
        .map(|v| v.truncate_components(&aug, columns.len()).rebase_prefix(&src))
        .filter(|v| !v.is_zero())
        .collect();
    out.dedup();
    Ok((src, out))
}

impl Vector {
    /// Reinterprets a vector supported on the first `module.rank()` components.
    pub(crate) fn rebase_prefix(&self, module: &FreeModuleRef) -> Vector {
        Vector::from_terms(module, self.terms().to_vec())
    }
}

/// Generators of `I ∩ k[variables not in block]`, as polynomials in the input ring.
pub fn eliminate(ring: &RingRef, gens: &[Polynomial], block: &[usize]) -> Result<Vec<Polynomial>> {
    if block.is_empty() {
        return ideal_basis_polys(ring, gens);
    }
    let mut mask = vec![false; ring.nvars()];
    for &b in block {
        mask[b] = true;
    }
    let elim = ring.with_order(MonomialOrder::Elimination(mask))?;
    let moved = gens.iter().map(|g| g.embed(&elim)).collect::<Result<Vec<_>>>()?;
    let gb = ideal_basis_polys(&elim, &moved)?;
    gb.iter()
        .filter(|g| g.terms().iter().all(|t| block.iter().all(|&b| t.mon.exp(b) == 0)))
        .map(|g| g.embed(ring))
        .collect()
}

/// Lexicographic comparison of bases by their printed form, used for stable sorting.
pub fn cmp_polys(a: &Polynomial, b: &Polynomial) -> Ordering {
    let ring = a.ring();
    for (x, y) in a.terms().iter().zip(b.terms()) {
        let c = ring.cmp(&x.mon, &y.mon);
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::parse::parse_polynomial;

    fn polys(r: &RingRef, s: &[&str]) -> Vec<Polynomial> {
        s.iter().map(|x| parse_polynomial(r, x).unwrap()).collect()
    }

    #[test]
    fn lex_basis_eliminates_x() {
        let r = Ring::new(
            Field::Rational,
            vec!["x".into(), "y".into()],
            vec![1, 1],
            MonomialOrder::Lex,
            false,
        )
        .unwrap();
        let gb = ideal_basis(&r, &polys(&r, &["x^2-y", "x^3"])).unwrap();
        let g: Vec<String> = gb.elements().iter().map(|v| v.component(0).to_string()).collect();
        // x^3 - x(x^2 - y) = xy and x(xy) - y(x^2 - y) = y^2
        assert_eq!(g, vec!["y^2", "x*y", "x^2-y"]);
        let y3 = Vector::from_poly(gb.module(), &polys(&r, &["y^3"])[0]).unwrap();
        assert!(gb.contains(&y3).unwrap());
    }

    #[test]
    fn already_reduced() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let g = ideal_basis_polys(&r, &polys(&r, &["x", "y"])).unwrap();
        let s: Vec<String> = g.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["y", "x"]);
    }

    #[test]
    fn monomial_redundancy_removed() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let g = ideal_basis_polys(&r, &polys(&r, &["x^2", "x^2*y", "y^3"])).unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn normal_forms() {
        let r = Ring::standard(Field::Rational, &["x", "y"]).unwrap();
        let gb = ideal_basis(&r, &polys(&r, &["x-y"])).unwrap();
        let m = gb.module().clone();
        let v = Vector::from_poly(&m, &parse_polynomial(&r, "x+y").unwrap()).unwrap();
        assert_eq!(gb.normal_form(&v).unwrap().component(0).to_string(), "2*y");
        let gb = ideal_basis(&r, &polys(&r, &["x^2"])).unwrap();
        let v = Vector::from_poly(gb.module(), &parse_polynomial(&r, "x^2*y").unwrap()).unwrap();
        assert!(gb.contains(&v).unwrap());
    }

    #[test]
    fn koszul_syzygy() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let f = FreeModule::new(&r, vec![0]);
        let gens: Vec<Vector> =
            polys(&r, &["x", "y"]).iter().map(|p| Vector::from_poly(&f, p).unwrap()).collect();
        let (_, syz) = syzygies(&f, &gens).unwrap();
        assert_eq!(syz.len(), 1);
        let p = syz[0].to_polys();
        assert_eq!(p[0].mul(&polys(&r, &["x"])[0]).unwrap().add(&p[1].mul(&polys(&r, &["y"])[0]).unwrap()).unwrap(), Polynomial::zero(&r));
    }

    #[test]
    fn duplicate_generator_syzygy() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let f = FreeModule::new(&r, vec![0]);
        let gens: Vec<Vector> =
            polys(&r, &["x^2", "x^2"]).iter().map(|p| Vector::from_poly(&f, p).unwrap()).collect();
        let (_, syz) = syzygies(&f, &gens).unwrap();
        assert!(syz.iter().any(|v| v.to_polys().iter().all(|p| p.is_constant())));
    }

    #[test]
    fn inhomogeneous_syzygy_rejected() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let f = FreeModule::new(&r, vec![0]);
        let g = Vector::from_poly(&f, &parse_polynomial(&r, "x+y^2").unwrap()).unwrap();
        assert!(matches!(syzygies(&f, &[g]), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn kernel_of_row_and_identity() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let f = FreeModule::new(&r, vec![0]);
        let cols: Vec<Vector> =
            polys(&r, &["x", "y"]).iter().map(|p| Vector::from_poly(&f, p).unwrap()).collect();
        let (_, k) = kernel_of_map(&f, &cols, &[]).unwrap();
        assert_eq!(k.len(), 1);
        let f2 = FreeModule::new(&r, vec![0, 0]);
        let id = vec![Vector::basis(&f2, 0), Vector::basis(&f2, 1)];
        let (_, k) = kernel_of_map(&f2, &id, &[]).unwrap();
        assert!(k.is_empty());
    }

    #[test]
    fn implicitization_by_elimination() {
        let r = Ring::standard(Field::Rational, &["t", "x", "y"]).unwrap();
        let e = eliminate(&r, &polys(&r, &["x-t^2", "y-t^3"]), &[0]).unwrap();
        assert_eq!(e.len(), 1);
        let target = polys(&r, &["y^2-x^3"])[0].clone();
        let gb = ideal_basis(&r, &e).unwrap();
        assert!(gb.contains(&Vector::from_poly(gb.module(), &target).unwrap()).unwrap());
        let gb2 = ideal_basis(&r, &[target]).unwrap();
        assert!(gb2.contains(&Vector::from_poly(gb2.module(), &e[0]).unwrap()).unwrap());
    }

    #[test]
    fn trace_lists_pairs() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y", "z"]).unwrap();
        let f = FreeModule::new(&r, vec![0]);
        let gens: Vec<Vector> = polys(&r, &["x*y-z^2", "x^2-y*z"])
            .iter()
            .map(|p| Vector::from_poly(&f, p).unwrap())
            .collect();
        let (gb, trace) = GroebnerBasis::compute_with(&f, &gens, &GbOptions { trace: true }).unwrap();
        assert!(!trace.is_empty());
        assert!(gb.verify().unwrap());
    }
}
