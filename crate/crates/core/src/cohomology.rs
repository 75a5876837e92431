//! Local cohomology invariants through graded duality, Tor against the
//! residue field of a local base, and fiber invariants of families.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::groebner::{kernel_of_map, syzygies_unchecked};
use crate::hilbert::{HilbertPolynomial, HilbertSeries};
use crate::ideal::Submodule;
use crate::module::{FreeModule, FreeModuleRef, Vector};
use crate::poly::{signed_coeff, Polynomial, Term};
use crate::resolution::{BaseMode, Resolution};
use crate::ring::{MonomialOrder, Ring, RingRef};
use crate::sampling;

/// An integer or `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AValue(pub Option<i64>);

impl AValue {
    pub const NEG_INF: AValue = AValue(None);

    pub fn finite(self) -> Option<i64> {
        self.0
    }

    pub fn is_neg_inf(self) -> bool {
        self.0.is_none()
    }
}

impl fmt::Display for AValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "-inf"),
        }
    }
}

impl Serialize for AValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str("-inf"),
        }
    }
}

/// `a^0 .. a^n` of a graded module over a field base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AInvariants {
    pub values: Vec<AValue>,
}

impl AInvariants {
    pub fn get(&self, i: usize) -> AValue {
        self.values.get(i).copied().unwrap_or(AValue::NEG_INF)
    }

    /// `max_i (a^i + i)`.
    pub fn regularity(&self) -> AValue {
        AValue(self.values.iter().enumerate().filter_map(|(i, a)| a.0.map(|v| v + i as i64)).max())
    }

    pub fn a_star(&self) -> AValue {
        self.values.iter().copied().max().unwrap_or(AValue::NEG_INF)
    }

    /// Largest `i` with `a^i` finite; `-1` when all vanish.
    pub fn cd(&self) -> i64 {
        self.values.iter().rposition(|a| a.0.is_some()).map_or(-1, |i| i as i64)
    }
}

impl fmt::Display for AInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn require_field_base(ring: &RingRef) -> Result<()> {
    if ring.has_base() {
        return Err(Error::Unsupported("duality needs a field base (no degree-zero variables)".into()));
    }
    Ok(())
}

/// `F_j^*`: basis degrees negated.
fn dual_module(res: &Resolution, j: usize) -> FreeModuleRef {
    FreeModule::new(res.ring(), res.twists(j).iter().map(|t| -t).collect())
}

/// Image of `d_j^T : F_{j-1}^* -> F_j^*`, spanned by the rows of `d_j`.
fn dual_image(res: &Resolution, j: usize) -> Result<Submodule> {
    let target = dual_module(res, j);
    let gens = match (j, res.map(j)) {
        (0, _) | (_, None) => Vec::new(),
        (_, Some(m)) => m.row_vectors(&target),
    };
    Submodule::new(&target, gens)
}

/// Kernel of the map given by `columns` in `target`, as vectors in `source`
/// (whose basis indexes the columns).
fn kernel(source: &FreeModuleRef, target: &FreeModuleRef, columns: &[Vector]) -> Result<Vec<Vector>> {
    if target.rank() == 0 || columns.iter().all(|c| c.is_zero()) {
        return Ok((0..source.rank()).map(|c| Vector::basis(source, c)).collect());
    }
    let (_, syz) = syzygies_unchecked(target, columns)?;
    Ok(syz.into_iter().map(|v| v.rebase(source)).filter(|v| !v.is_zero()).collect())
}

/// Hilbert series of `Ext^j_S(M, S)` from a minimal resolution of `M`.
pub fn ext_series(res: &Resolution, j: usize) -> Result<HilbertSeries> {
    require_field_base(res.ring())?;
    let weights = HilbertSeries::ring_weights(res.ring())?;
    let free = HilbertSeries::free(weights, dual_module(res, j).twists());
    let next = dual_image(res, j + 1)?.series()?;
    let prev = dual_image(res, j)?.series()?;
    free.sub(&next)?.sub(&prev)
}

/// Presentation `F' / U` of `Ext^j_S(F/V, S)`; the returned submodule is `U`.
pub fn ext_module(pres: &Submodule, j: usize) -> Result<Submodule> {
    require_field_base(pres.ring())?;
    let res = Resolution::of_quotient(pres, BaseMode::Field)?;
    let src = dual_module(&res, j);
    let tgt = dual_module(&res, j + 1);
    let cols = match res.map(j + 1) {
        Some(m) => m.row_vectors(&tgt),
        None => Vec::new(),
    };
    let ker = kernel(&src, &tgt, &cols)?;
    let rel = dual_image(&res, j)?;
    subquotient(&src, ker, rel.gens())
}

/// Presentation of `<gens> / (<gens> ∩ <relations>)` as `F' / U`.
fn subquotient(ambient: &FreeModuleRef, gens: Vec<Vector>, relations: &[Vector]) -> Result<Submodule> {
    let ring = ambient.ring();
    if gens.is_empty() {
        return Ok(Submodule::zero(&FreeModule::new(ring, Vec::new())));
    }
    let sub = Submodule::new(ambient, gens)?;
    let mingens = sub.minimal_generators()?;
    if mingens.is_empty() {
        return Ok(Submodule::zero(&FreeModule::new(ring, Vec::new())));
    }
    let (src, ker) = kernel_of_map(ambient, &mingens, relations)?;
    Submodule::new(&src, ker)
}

pub fn a_invariants_of(res: &Resolution) -> Result<AInvariants> {
    let ring = res.ring();
    require_field_base(ring)?;
    let n = ring.n();
    let sigma = ring.sigma();
    let mut values = vec![AValue::NEG_INF; n + 1];
    for (i, slot) in values.iter_mut().enumerate() {
        let hs = ext_series(res, n - i)?;
        if let Some(lo) = hs.indeg() {
            *slot = AValue(Some(-lo - sigma));
        }
    }
    Ok(AInvariants { values })
}

/// `a^i(F/V)` for `i = 0..n` with `a^i = -indeg Ext^{n-i}(F/V, S) - sigma`.
pub fn a_invariants(pres: &Submodule) -> Result<AInvariants> {
    require_field_base(pres.ring())?;
    a_invariants_of(&Resolution::of_quotient(pres, BaseMode::Field)?)
}

/// Regularity from the a-invariants.
pub fn reg_coh(pres: &Submodule) -> Result<AValue> {
    Ok(a_invariants(pres)?.regularity())
}

/// For a finitely generated module over a field base the cohomological
/// dimension with respect to the irrelevant ideal is its Krull dimension.
pub fn cd_irrelevant(pres: &Submodule) -> Result<i64> {
    pres.quotient_dimension()
}

fn check_family(ring: &RingRef) -> Result<()> {
    if !ring.has_base() {
        return Err(Error::InvalidArgument("a family needs degree-zero base variables".into()));
    }
    Ok(())
}

/// Fiber of the family `F/V` over the point with the given base coordinates.
pub fn fiber_module(pres: &Submodule, point: &[Coeff]) -> Result<Submodule> {
    let ring = pres.ring().clone();
    check_family(&ring)?;
    let base = ring.base_vars();
    if point.len() != base.len() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates but the base has {} variables",
            point.len(),
            base.len()
        )));
    }
    let fiber = ring.fiber_ring()?;
    let values: Vec<(usize, Coeff)> = base.iter().copied().zip(point.iter().cloned()).collect();
    pres.map(&fiber, |p| p.substitute(&values).restrict(&fiber))
}

pub fn origin(ring: &RingRef) -> Vec<Coeff> {
    vec![ring.field().zero(); ring.base_vars().len()]
}

/// `Tor_q^R(M, k)` over the local base at the origin, presented over the
/// fiber ring; the returned submodule `U` gives `Tor_q = F' / U`.
pub fn tor_base(pres: &Submodule, q: i64) -> Result<Submodule> {
    if q < 0 {
        return Err(Error::InvalidArgument("Tor index must be non-negative".into()));
    }
    let ring = pres.ring().clone();
    check_family(&ring)?;
    if !ring.is_local_base() {
        return Err(Error::InvalidArgument("Tor over the base needs a ring declared local".into()));
    }
    let q = q as usize;
    let res = Resolution::of_quotient(pres, BaseMode::Local)?;
    let fiber = ring.fiber_ring()?;
    let zero = origin(&ring);
    let values: Vec<(usize, Coeff)> = ring.base_vars().into_iter().zip(zero).collect();
    let special = res.map_complex(&fiber, |p| p.substitute(&values).restrict(&fiber))?;
    homology(&special, q)
}

/// `ker d_q / im d_{q+1}` of a complex of free modules.
pub fn homology(cx: &Resolution, q: usize) -> Result<Submodule> {
    let ring = cx.ring();
    let fq = cx.free_module(q);
    if fq.rank() == 0 {
        return Ok(Submodule::zero(&FreeModule::new(ring, Vec::new())));
    }
    let ker = match cx.map(q) {
        Some(m) if q > 0 => kernel(&fq, &cx.free_module(q - 1), &m.columns(&cx.free_module(q - 1)))?,
        _ => (0..fq.rank()).map(|c| Vector::basis(&fq, c)).collect(),
    };
    let rel = match cx.map(q + 1) {
        Some(m) => m.columns(&fq),
        None => Vec::new(),
    };
    subquotient(&fq, ker, &rel)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub point: Vec<String>,
    pub fiber_ideal: Vec<String>,
    pub a: AInvariants,
    pub reg: AValue,
    /// Projective dimension of the fiber (`-1` when empty).
    pub dim: i64,
    /// Monomial-basis coefficients, constant term first.
    pub hilbert_poly: Vec<String>,
}

fn coeff_string(field: &crate::coeff::Field, c: &Coeff) -> String {
    let (neg, body) = signed_coeff(field, c);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Invariants of a module over a field base, cross-checking the Betti and
/// duality sides of the regularity.
pub fn module_report(point: Vec<String>, pres: &Submodule) -> Result<FiberReport> {
    let res = Resolution::of_quotient(pres, BaseMode::Field)?;
    let a = a_invariants_of(&res)?;
    let reg = AValue(res.betti().regularity());
    if reg != a.regularity() {
        return Err(Error::Verification(format!(
            "regularity {} from Betti numbers but {} from local cohomology",
            reg,
            a.regularity()
        )));
    }
    let hs = pres.quotient_series()?;
    let hp = if pres.ring().is_standard_graded() {
        hs.hilbert_polynomial()?.monomial_coefficients().iter().map(|c| c.to_string()).collect()
    } else {
        Vec::new()
    };
    let fiber_ideal = pres.reduced()?.gens().iter().map(|g| {
        if g.module().rank() == 1 {
            g.component(0).to_string()
        } else {
            g.to_string()
        }
    }).collect();
    Ok(FiberReport { point, fiber_ideal, a, reg, dim: hs.dimension() - 1, hilbert_poly: hp })
}

pub fn fiber_report(pres: &Submodule, point: &[Coeff]) -> Result<FiberReport> {
    let field = pres.ring().field().clone();
    let fiber = fiber_module(pres, point)?;
    module_report(point.iter().map(|c| coeff_string(&field, c)).collect(), &fiber)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberDimensionCertificate {
    pub point: Vec<String>,
    /// Krull dimension of the fiber module.
    pub dim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberDimensionReport {
    /// A lower bound for the maximum over all points.
    pub max: i64,
    pub certificates: Vec<FiberDimensionCertificate>,
}

/// Largest fiber dimension over the origin, `user_points` and `trials`
/// random points.
pub fn max_fiber_dimension(pres: &Submodule, trials: usize, seed: u64, user_points: &[Vec<Coeff>]) -> Result<FiberDimensionReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("max_fiber_dimension needs at least one trial".into()));
    }
    let ring = pres.ring().clone();
    check_family(&ring)?;
    let m = ring.base_vars().len();
    let mut points = vec![origin(&ring)];
    points.extend(user_points.iter().cloned());
    for i in 0..trials {
        let mut rng = sampling::stream(seed, i as u64);
        points.push(sampling::random_point(ring.field(), m, &mut rng));
    }
    let mut certificates = Vec::with_capacity(points.len());
    for p in &points {
        let dim = fiber_module(pres, p)?.quotient_dimension()?;
        certificates.push(FiberDimensionCertificate {
            point: p.iter().map(|c| coeff_string(ring.field(), c)).collect(),
            dim,
        });
    }
    let max = certificates.iter().map(|c| c.dim).max().unwrap_or(-1);
    Ok(FiberDimensionReport { max, certificates })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub first: HilbertPolynomial,
    pub second: HilbertPolynomial,
    pub difference: HilbertPolynomial,
    /// `-1` when the polynomials agree.
    pub degree: i64,
    pub within: bool,
}

/// Compares the Hilbert polynomials of two fibers.
pub fn flatness_defect(pres: &Submodule, p1: &[Coeff], p2: &[Coeff], threshold: i64) -> Result<FlatnessReport> {
    let ring = pres.ring();
    if ring.positive_vars().iter().any(|&i| ring.weight(i) != 1) {
        return Err(Error::Unsupported("Hilbert polynomials need standard grading".into()));
    }
    let first = fiber_module(pres, p1)?.quotient_series()?.hilbert_polynomial()?;
    let second = fiber_module(pres, p2)?.quotient_series()?.hilbert_polynomial()?;
    let difference = first.sub(&second);
    let degree = difference.degree();
    Ok(FlatnessReport { first, second, difference, degree, within: degree < threshold })
}

/// Smallest `e <= max_exp` with `g^e` annihilating `F' / U`.
pub fn annihilating_power(module: &Submodule, g: &Polynomial, max_exp: u32) -> Result<Option<u32>> {
    let amb = module.ambient().clone();
    let mut power = Polynomial::one(g.ring());
    for e in 0..=max_exp {
        let mut all = true;
        for c in 0..amb.rank() {
            if !module.contains(&Vector::basis(&amb, c).mul_poly(&power))? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(Some(e));
        }
        power = power.mul(g)?;
    }
    Ok(None)
}

/// Every generator of the fiber annihilator at the origin has a power
/// killing `Tor_q`; returns the exponents found.
pub fn support_containment(pres: &Submodule, q: i64, max_exp: u32) -> Result<Vec<Option<u32>>> {
    let tor = tor_base(pres, q)?;
    let fiber = fiber_module(pres, &origin(pres.ring()))?;
    let ann = fiber.annihilator()?;
    ann.polys()?.iter().map(|g| annihilating_power(&tor, g, max_exp)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopBaseChange {
    /// Krull dimension `d` of the fiber at the origin.
    pub d: i64,
    pub fiber: AValue,
    pub stalk: AValue,
}

impl TopBaseChange {
    pub fn agrees(&self) -> bool {
        self.fiber == self.stalk
    }
}

/// `a^d` of the stalk at the origin against `a^d` of the fiber there, with
/// `d` the fiber dimension.
///
/// The stalk side evaluates each graded strand of `H_{n-d}(H^n(F_.))` as a
/// complex of free modules over the base polynomial ring, and tests whether
/// the homology has the origin in its support.
pub fn top_base_change(pres: &Submodule) -> Result<TopBaseChange> {
    let ring = pres.ring().clone();
    check_family(&ring)?;
    let fiber = fiber_module(pres, &origin(&ring))?;
    let d = fiber.quotient_dimension()?;
    if d < 0 {
        return Ok(TopBaseChange { d, fiber: AValue::NEG_INF, stalk: AValue::NEG_INF });
    }
    let fa = a_invariants(&fiber)?.get(d as usize);
    let res = Resolution::of_quotient(pres, BaseMode::Local)?;
    let n = ring.n() as i64;
    let sigma = ring.sigma();
    let q = (n - d) as usize;
    let hi = (0..res.len()).flat_map(|j| res.twists(j).iter().copied()).max().unwrap_or(0) - sigma;
    let lo = fa.0.unwrap_or(hi).min(hi);
    let strands = Strands::new(&ring, &res)?;
    let mut stalk = AValue::NEG_INF;
    for mu in (lo..=hi).rev() {
        if strands.homology_at_origin(q, mu)? {
            stalk = AValue(Some(mu));
            break;
        }
    }
    Ok(TopBaseChange { d, fiber: fa, stalk })
}

/// Graded strands of `H^n_{S_+}` applied to a resolution over a base.
struct Strands<'a> {
    ring: &'a RingRef,
    res: &'a Resolution,
    base: RingRef,
    pos: Vec<usize>,
}

impl<'a> Strands<'a> {
    fn new(ring: &'a RingRef, res: &'a Resolution) -> Result<Self> {
        let bv = ring.base_vars();
        let base = Ring::new(
            ring.field().clone(),
            bv.iter().map(|&i| ring.name(i).to_string()).collect(),
            vec![1; bv.len()],
            MonomialOrder::Grevlex,
            false,
        )?;
        Ok(Strands { ring, res, base, pos: ring.positive_vars() })
    }

    /// Basis of `H^n(F_j)_mu`: pairs (component, exponents `beta >= 1` of the
    /// inverse monomial in the positive variables).
    fn basis(&self, j: usize, mu: i64) -> Vec<(usize, Vec<u32>)> {
        let sigma = self.ring.sigma();
        let mut out = Vec::new();
        for (c, &t) in self.res.twists(j).iter().enumerate() {
            for e in sampling::monomials_of_degree(self.ring, &self.pos, t - mu - sigma) {
                out.push((c, self.pos.iter().map(|&v| e[v] as u32 + 1).collect()));
            }
        }
        out
    }

    /// The map `H^n(F_j)_mu -> H^n(F_{j-1})_mu` as columns over the base ring.
    fn strand_map(&self, j: usize, rows: &[(usize, Vec<u32>)], cols: &[(usize, Vec<u32>)]) -> Result<Vec<Vector>> {
        let module = FreeModule::new(&self.base, vec![0; rows.len()]);
        let d = self.res.map(j).expect("map exists");
        let bv = self.ring.base_vars();
        let mut out = Vec::with_capacity(cols.len());
        for (c, beta) in cols {
            let mut entries = vec![Vec::<Term>::new(); rows.len()];
            for r in 0..d.rows() {
                for t in d.get(r, *c).terms() {
                    let alpha: Vec<u32> = self.pos.iter().map(|&v| t.mon.exp(v) as u32).collect();
                    if alpha.iter().zip(beta).any(|(a, b)| a >= b) {
                        continue;
                    }
                    let target: Vec<u32> = beta.iter().zip(&alpha).map(|(b, a)| b - a).collect();
                    if let Some(k) = rows.iter().position(|(rc, rb)| *rc == r && *rb == target) {
                        let exps: Vec<u32> = bv.iter().map(|&v| t.mon.exp(v) as u32).collect();
                        entries[k].push(Term { mon: self.base.monomial_from(&exps), coeff: t.coeff.clone() });
                    }
                }
            }
            let polys: Vec<Polynomial> = entries.into_iter().map(|ts| Polynomial::from_terms(&self.base, ts)).collect();
            out.push(Vector::from_polys(&module, &polys)?);
        }
        Ok(out)
    }

    /// Whether `H_q` of the degree-`mu` strand is nonzero after localizing
    /// at the origin of the base.
    fn homology_at_origin(&self, q: usize, mu: i64) -> Result<bool> {
        let cq = self.basis(q, mu);
        if cq.is_empty() {
            return Ok(false);
        }
        let cq_mod = FreeModule::new(&self.base, vec![0; cq.len()]);
        let cycles = if q == 0 {
            (0..cq.len()).map(|c| Vector::basis(&cq_mod, c)).collect()
        } else {
            let below = self.basis(q - 1, mu);
            let tgt = FreeModule::new(&self.base, vec![0; below.len()]);
            let cols = self.strand_map(q, &below, &cq)?;
            kernel(&cq_mod, &tgt, &cols)?
        };
        let bounds = if self.res.map(q + 1).is_some() {
            let above = self.basis(q + 1, mu);
            self.strand_map(q + 1, &cq, &above)?
        } else {
            Vec::new()
        };
        for z in cycles {
            let mut gens = vec![z];
            gens.extend(bounds.iter().cloned());
            let (_, syz) = syzygies_unchecked(&cq_mod, &gens)?;
            // (bounds : z) lies in the maximal ideal iff no element of it is a unit there.
            let inside = syz.iter().all(|s| s.component(0).constant_term().is_zero());
            if inside {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
