//! Powers of ideals: reduction degree, invariants of `I^t`, linear tails,
//! the Rees ideal with sampled fibers of the graph projection, and the
//! cross-check between the direct and the geometric side.

use std::collections::BTreeMap;
use std::time::Duration;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::budget;
use crate::coeff::Coeff;
use crate::cohomology::{a_invariants_of, module_report, AInvariants, AValue, FiberReport};
use crate::error::{Error, Result};
use crate::groebner::eliminate;
use crate::hilbert::HilbertPolynomial;
use crate::ideal::Submodule;
use crate::poly::Polynomial;
use crate::resolution::{BaseMode, Resolution};
use crate::ring::{MonomialOrder, Ring, RingRef};
use crate::sampling;

pub const DEFAULT_T_MAX: usize = 6;
pub const DEFAULT_P_MAX: usize = 4;
const POINT_RETRIES: usize = 100;

fn require_nonzero_ideal(i: &Submodule) -> Result<()> {
    if !i.is_ideal() {
        return Err(Error::InvalidArgument("expected an ideal".into()));
    }
    if i.is_zero() {
        return Err(Error::InvalidArgument("the zero ideal has no reduction degree".into()));
    }
    i.require_homogeneous()
}

fn unit_module(i: &Submodule) -> Result<Submodule> {
    Ok(Submodule::unit_ideal(i.ring()))
}

/// `I^p U`, with `I^0 U = U`.
fn power_times(i: &Submodule, p: usize, u: &Submodule) -> Result<Submodule> {
    let mut acc = u.clone();
    for _ in 0..p {
        acc = i.product(&acc)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStep {
    pub mu: i64,
    pub p: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionData {
    pub d: i64,
    pub p_witness: usize,
    /// Generators of `I` of degree at most `d`.
    pub reduction: Vec<String>,
    /// Whether every smaller truncation is certified not to be a reduction.
    pub exact: bool,
    pub log: Vec<SearchStep>,
}

/// Least `mu` such that `(I_{<=mu}) I^p M = I^{p+1} M` for some `p <= p_max`.
/// `module` is `M` as a submodule of a free module; `None` means the ring.
pub fn reduction_degree(i: &Submodule, module: Option<&Submodule>, p_max: usize) -> Result<ReductionData> {
    require_nonzero_ideal(i)?;
    if p_max < 1 {
        return Err(Error::InvalidArgument("p_max must be at least 1".into()));
    }
    let m = match module {
        Some(m) => m.clone(),
        None => unit_module(i)?,
    };
    let degs = i.generator_degrees()?;
    let lo = *degs.iter().min().unwrap();
    let hi = *degs.iter().max().unwrap();
    let im_dim = i.product(&m)?.quotient_dimension()?;
    let powers: Vec<Submodule> = (0..=p_max + 1).map(|p| power_times(i, p, &m)).collect::<Result<_>>()?;
    let mut log = Vec::new();
    let mut exact = true;
    for mu in lo..=hi {
        let j = i.truncate_below(mu)?;
        for p in 0..=p_max {
            budget::check()?;
            let holds = j.product(&powers[p])?.equals(&powers[p + 1])?;
            log.push(SearchStep { mu, p, holds });
            if holds {
                return Ok(ReductionData {
                    d: mu,
                    p_witness: p,
                    reduction: j.gens().iter().map(|g| g.component(0).to_string()).collect(),
                    exact,
                    log,
                });
            }
        }
        // A reduction has the same support on M, so a larger dimension of
        // M / J M rules this truncation out for every p.
        if j.product(&m)?.quotient_dimension()? <= im_dim {
            exact = false;
        }
    }
    Err(Error::Verification("the full generating set failed to be a reduction".into()))
}

/// Regularity and a-invariants of an ideal viewed as a module, checked
/// against each other.
pub fn ideal_invariants(i: &Submodule) -> Result<(AValue, AInvariants)> {
    let res = Resolution::of_quotient(i, BaseMode::Field)?.tail();
    let a = a_invariants_of(&res)?;
    let reg = AValue(res.betti().regularity());
    if reg != a.regularity() {
        return Err(Error::Verification(format!("regularity {reg} from Betti numbers, {} from cohomology", a.regularity())));
    }
    Ok((reg, a))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerRow {
    pub t: usize,
    pub reg: Option<AValue>,
    pub a: Option<AInvariants>,
    pub reg_sat: Option<AValue>,
    pub b0: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
    /// Cells abandoned at the time limit, as `"t=<t>:<column>"`.
    pub holes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PowerOptions {
    pub saturated: bool,
    pub cell_budget: Option<Duration>,
}

fn hole_or<T>(r: Result<T>, name: String, holes: &mut Vec<String>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Budget) => {
            holes.push(name);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn power_row(i: &Submodule, t: usize, opts: PowerOptions) -> Result<(PowerRow, Vec<String>)> {
    let mut holes = Vec::new();
    let pw = budget::with_budget(opts.cell_budget, || i.power(t as i64));
    let Some(pw) = hole_or(pw, format!("t={t}:power"), &mut holes)? else {
        for c in ["reg", "a", "b0"] {
            holes.push(format!("t={t}:{c}"));
        }
        if opts.saturated {
            holes.push(format!("t={t}:reg_sat"));
        }
        return Ok((PowerRow { t, reg: None, a: None, reg_sat: None, b0: None }, holes));
    };
    let inv = hole_or(budget::with_budget(opts.cell_budget, || ideal_invariants(&pw)), format!("t={t}:reg"), &mut holes)?;
    let b0 = hole_or(
        budget::with_budget(opts.cell_budget, || Ok(pw.generator_degrees()?.into_iter().max().unwrap_or(0))),
        format!("t={t}:b0"),
        &mut holes,
    )?;
    let reg_sat = if opts.saturated {
        hole_or(
            budget::with_budget(opts.cell_budget, || Ok(ideal_invariants(&pw.saturate_irrelevant()?)?.0)),
            format!("t={t}:reg_sat"),
            &mut holes,
        )?
    } else {
        None
    };
    let (reg, a) = match inv {
        Some((r, a)) => (Some(r), Some(a)),
        None => (None, None),
    };
    Ok((PowerRow { t, reg, a, reg_sat, b0 }, holes))
}

/// Invariants of `I^t` for `t = 1..=t_max`, rows computed in parallel.
pub fn power_invariants(i: &Submodule, t_max: usize, opts: PowerOptions) -> Result<PowerTable> {
    require_nonzero_ideal(i)?;
    let ring = i.ring();
    if ring.has_base() {
        return Err(Error::Unsupported("powers are tabulated over a field base".into()));
    }
    if t_max < 1 {
        return Err(Error::InvalidArgument("t_max must be at least 1".into()));
    }
    let rows: Vec<(PowerRow, Vec<String>)> =
        (1..=t_max).into_par_iter().map(|t| power_row(i, t, opts)).collect::<Result<_>>()?;
    let mut table = PowerTable { rows: Vec::new(), holes: Vec::new() };
    for (r, h) in rows {
        table.rows.push(r);
        table.holes.extend(h);
    }
    Ok(table)
}

impl PowerTable {
    pub fn reg_sequence(&self) -> Vec<Option<AValue>> {
        self.rows.iter().map(|r| r.reg).collect()
    }

    pub fn reg_sat_sequence(&self) -> Vec<Option<AValue>> {
        self.rows.iter().map(|r| r.reg_sat).collect()
    }

    pub fn a_sequence(&self, i: usize) -> Vec<Option<AValue>> {
        self.rows.iter().map(|r| r.a.as_ref().map(|a| a.get(i))).collect()
    }

    pub fn b0_sequence(&self) -> Vec<Option<i64>> {
        self.rows.iter().map(|r| r.b0).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailKind {
    Linear,
    /// The sequence is `-inf` from `stable_from` on.
    NegInf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearTailReport {
    pub kind: TailKind,
    pub slope: i64,
    pub intercept: i64,
    /// First `t` (counting from 1) of the tail.
    pub stable_from: usize,
    /// At least three equal consecutive differences within the window.
    pub confirmed: bool,
    pub raw: Vec<AValue>,
    pub identically_neg_inf: bool,
}

/// Longest suffix of `seq` (indexed from `t = 1`) that is linear or
/// constantly `-inf`.
pub fn linear_tail(seq: &[AValue]) -> Result<LinearTailReport> {
    if seq.len() < 4 {
        return Err(Error::InvalidArgument("a linear tail needs at least four values".into()));
    }
    let n = seq.len();
    let identically = seq.iter().all(|a| a.is_neg_inf());
    if seq[n - 1].is_neg_inf() {
        let start = seq.iter().rposition(|a| !a.is_neg_inf()).map_or(0, |k| k + 1);
        return Ok(LinearTailReport {
            kind: TailKind::NegInf,
            slope: 0,
            intercept: 0,
            stable_from: start + 1,
            confirmed: n - start >= 4,
            raw: seq.to_vec(),
            identically_neg_inf: identically,
        });
    }
    let vals: Vec<Option<i64>> = seq.iter().map(|a| a.0).collect();
    let last = vals[n - 1].unwrap();
    let mut start = n - 1;
    let mut slope = 0;
    if n >= 2 && vals[n - 2].is_some() {
        slope = last - vals[n - 2].unwrap();
        start = n - 2;
        while start > 0 {
            match (vals[start - 1], vals[start]) {
                (Some(a), Some(b)) if b - a == slope => start -= 1,
                _ => break,
            }
        }
    }
    let t0 = (start + 1) as i64;
    let intercept = vals[start].unwrap() - slope * t0;
    Ok(LinearTailReport {
        kind: TailKind::Linear,
        slope,
        intercept,
        stable_from: start + 1,
        confirmed: n - 1 - start >= 3,
        raw: seq.to_vec(),
        identically_neg_inf: false,
    })
}

/// Behaviour of `lim (x_t - d t)` read off a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    NegInf,
    Finite(i64),
    /// Tail not confirmed, holes in the window, or growth faster than `d t`.
    Unknown,
}

impl Limit {
    pub fn value(self) -> Option<AValue> {
        match self {
            Limit::NegInf => Some(AValue::NEG_INF),
            Limit::Finite(v) => Some(AValue(Some(v))),
            Limit::Unknown => None,
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            Limit::NegInf => json!("-inf"),
            Limit::Finite(v) => json!(v),
            Limit::Unknown => json!("unknown"),
        }
    }
}

/// `lim (seq_t - d t)` from the confirmed tail of the window.
pub fn limit_minus(seq: &[Option<AValue>], d: i64) -> Limit {
    let Some(vals) = seq.iter().copied().collect::<Option<Vec<AValue>>>() else {
        return Limit::Unknown;
    };
    let shifted: Vec<AValue> =
        vals.iter().enumerate().map(|(k, a)| AValue(a.0.map(|v| v - d * (k as i64 + 1)))).collect();
    let Ok(tail) = linear_tail(&shifted) else {
        return Limit::Unknown;
    };
    if !tail.confirmed {
        return Limit::Unknown;
    }
    match tail.kind {
        TailKind::NegInf => Limit::NegInf,
        TailKind::Linear if tail.slope < 0 => Limit::NegInf,
        TailKind::Linear if tail.slope == 0 => Limit::Finite(tail.intercept),
        TailKind::Linear => Limit::Unknown,
    }
}

/// `end(I^t M / A_+ I^t M) >= indeg(M) + t d` for every `t <= t_max`.
pub fn kodiyalam_check(i: &Submodule, module: Option<&Submodule>, t_max: usize) -> Result<Vec<(usize, i64, i64, bool)>> {
    let m = match module {
        Some(m) => m.clone(),
        None => unit_module(i)?,
    };
    let d = reduction_degree(i, Some(&m), DEFAULT_P_MAX)?.d;
    let indeg = m.generator_degrees()?.into_iter().min().unwrap_or(0);
    let mut out = Vec::with_capacity(t_max);
    let mut cur = m.clone();
    for t in 1..=t_max {
        cur = i.product(&cur)?;
        let end = cur.generator_degrees()?.into_iter().max().unwrap_or(i64::MIN);
        let bound = indeg + t as i64 * d;
        out.push((t, end, bound, end >= bound));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledFiber {
    /// Point `x` in the source space.
    pub source: Vec<String>,
    /// Generators of the Rees ideal specialized at `q = phi(x)`.
    pub specialized: Vec<String>,
    pub report: FiberReport,
    #[serde(skip)]
    pub hilbert: Option<HilbertPolynomial>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReesPackage {
    pub degree: i64,
    pub rees_ideal: Vec<String>,
    pub image_ideal: Vec<String>,
    /// Largest sampled fiber dimension.
    pub delta: i64,
    pub fibers: Vec<SampledFiber>,
    /// Lower bounds `max over sampled fibers of a^i`.
    pub a_gamma: Vec<AValue>,
    pub freg: AValue,
    #[serde(skip)]
    pub rees_ring: Option<RingRef>,
}

fn fresh_names(taken: &[String], stem: &str, count: usize) -> Vec<String> {
    let mut prefix = stem.to_string();
    loop {
        let names: Vec<String> = (0..count).map(|k| format!("{prefix}{k}")).collect();
        if names.iter().all(|n| !taken.contains(n)) {
            return names;
        }
        prefix.push('_');
    }
}

/// Rees ideal of an equigenerated ideal with fibers of the graph projection
/// over the images of `samples` random points and of `user_points`.
pub fn rees_package(i: &Submodule, samples: usize, seed: u64, user_points: &[Vec<Coeff>]) -> Result<ReesPackage> {
    require_nonzero_ideal(i)?;
    let ring = i.ring().clone();
    if ring.has_base() {
        return Err(Error::Unsupported("the Rees package works over a field base".into()));
    }
    let gens: Vec<Polynomial> = i.minimal_generators()?.iter().map(|g| g.component(0)).collect();
    let degs: Vec<i64> = gens.iter().map(|g| g.degree().unwrap()).collect();
    if degs.iter().any(|&e| e != degs[0]) {
        return Err(Error::NotEquigenerated);
    }
    let d0 = degs[0];
    let nx = ring.nvars();
    let m = gens.len();
    let field = ring.field().clone();
    let tnames = fresh_names(ring.names(), "T", m);
    let mut all_names: Vec<String> = ring.names().to_vec();
    all_names.extend(tnames.iter().cloned());
    let snames = fresh_names(&all_names, "s", 1);

    // Eliminate s from (T_i - s f_i) in k[X, T, s].
    let mut ext_names = all_names.clone();
    ext_names.push(snames[0].clone());
    let ext = Ring::new(field.clone(), ext_names, vec![1; nx + m + 1], MonomialOrder::Grevlex, false)?;
    let s = Polynomial::var(&ext, nx + m);
    let mut rel = Vec::with_capacity(m);
    for (k, f) in gens.iter().enumerate() {
        rel.push(Polynomial::var(&ext, nx + k).sub(&s.mul(&f.embed(&ext)?)?)?);
    }
    let kernel = eliminate(&ext, &rel, &[nx + m])?;
    let mut weights = ring.weights().to_vec();
    weights.extend(std::iter::repeat_n(0, m));
    let mut tweights = vec![0; nx];
    tweights.extend(std::iter::repeat_n(1, m));
    let rees = Ring::with_bigrading(field.clone(), all_names.clone(), weights, tweights, MonomialOrder::Grevlex, false)?;
    let rees_gens = kernel.iter().map(|g| g.restrict(&rees)).collect::<Result<Vec<_>>>()?;
    let rees_ideal = Submodule::ideal(&rees, &rees_gens)?;

    let tring = Ring::new(field.clone(), tnames.clone(), vec![1; m], MonomialOrder::Grevlex, false)?;
    let flat = Ring::new(field.clone(), all_names.clone(), vec![1; nx + m], MonomialOrder::Grevlex, false)?;
    let flat_gens = rees_gens.iter().map(|g| g.embed(&flat)).collect::<Result<Vec<_>>>()?;
    let xs: Vec<usize> = (0..nx).collect();
    let image = eliminate(&flat, &flat_gens, &xs)?;
    let image_polys = image.iter().map(|g| g.restrict(&tring)).collect::<Result<Vec<_>>>()?;
    verify_image(&ring, &gens, &tring, &image_polys)?;

    let tvars: Vec<usize> = (nx..nx + m).collect();
    let mut points: Vec<Vec<Coeff>> = user_points.to_vec();
    for k in 0..samples {
        let mut rng = sampling::stream(seed, k as u64);
        let mut found = None;
        for _ in 0..POINT_RETRIES {
            let x = sampling::random_point(&field, nx, &mut rng);
            if gens.iter().any(|f| !f.evaluate(&x).is_zero()) {
                found = Some(x);
                break;
            }
        }
        match found {
            Some(x) => points.push(x),
            None => return Err(Error::InvalidArgument("every sampled point fell in the base locus; use more trials".into())),
        }
    }
    let fiber_ring = rees.fiber_ring()?;
    let fibers: Vec<SampledFiber> = points
        .par_iter()
        .map(|x| -> Result<SampledFiber> {
            let q: Vec<Coeff> = gens.iter().map(|f| f.evaluate(x)).collect();
            if q.iter().all(|c| c.is_zero()) {
                return Err(Error::InvalidArgument("a supplied point lies in the base locus".into()));
            }
            let values: Vec<(usize, Coeff)> = tvars.iter().copied().zip(q.iter().cloned()).collect();
            let spec = rees_gens
                .iter()
                .map(|g| g.substitute(&values).restrict(&fiber_ring))
                .collect::<Result<Vec<_>>>()?;
            let spec_ideal = Submodule::ideal(&fiber_ring, &spec)?;
            let saturated = spec_ideal.saturate_irrelevant()?;
            let label = q.iter().map(|c| Polynomial::constant(&fiber_ring, c.clone()).to_string()).collect();
            let report = module_report(label, &saturated)?;
            let hilbert = saturated.quotient_series()?.hilbert_polynomial().ok();
            Ok(SampledFiber {
                source: x.iter().map(|c| Polynomial::constant(&fiber_ring, c.clone()).to_string()).collect(),
                specialized: spec.iter().filter(|p| !p.is_zero()).map(|p| p.to_string()).collect(),
                report,
                hilbert,
            })
        })
        .collect::<Result<_>>()?;
    let n = ring.nvars();
    let mut a_gamma = vec![AValue::NEG_INF; n + 1];
    for f in &fibers {
        for (k, slot) in a_gamma.iter_mut().enumerate() {
            *slot = (*slot).max(f.report.a.get(k));
        }
    }
    let freg = AValue(a_gamma.iter().enumerate().skip(1).filter_map(|(k, a)| a.0.map(|v| v + k as i64)).max());
    let delta = fibers.iter().map(|f| f.report.dim).max().unwrap_or(-1);
    Ok(ReesPackage {
        degree: d0,
        rees_ideal: rees_ideal.gens().iter().map(|g| g.component(0).to_string()).collect(),
        image_ideal: image_polys.iter().map(|p| p.to_string()).collect(),
        delta,
        fibers,
        a_gamma,
        freg,
        rees_ring: Some(rees),
    })
}

/// The image ideal from the Rees ideal must match the kernel of
/// `T_i -> f_i` computed directly.
fn verify_image(ring: &RingRef, gens: &[Polynomial], tring: &RingRef, image: &[Polynomial]) -> Result<()> {
    let nx = ring.nvars();
    let m = gens.len();
    let mut names = ring.names().to_vec();
    names.extend(tring.names().iter().cloned());
    let d0 = gens[0].degree().unwrap();
    let mut weights = ring.weights().to_vec();
    weights.extend(std::iter::repeat_n(d0 as u32, m));
    let big = Ring::new(ring.field().clone(), names, weights, MonomialOrder::Grevlex, false)?;
    let rel = gens
        .iter()
        .enumerate()
        .map(|(k, f)| Polynomial::var(&big, nx + k).sub(&f.embed(&big)?))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<usize> = (0..nx).collect();
    let direct = eliminate(&big, &rel, &xs)?.iter().map(|g| g.restrict(tring)).collect::<Result<Vec<_>>>()?;
    let a = Submodule::ideal(tring, image)?;
    let b = Submodule::ideal(tring, &direct)?;
    if !a.equals(&b)? {
        return Err(Error::Verification("image ideal differs from the elimination of the Rees ideal".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    ConsistentLowerBound,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClauseVerdict {
    pub clause: String,
    pub status: Status,
    pub data: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trichotomy {
    pub limit: Value,
    pub nonnegative: bool,
    pub finite: bool,
    pub positive_dimensional_fiber: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub d: i64,
    pub table: PowerTable,
    pub reg_limit: Value,
    pub sat_limit: Value,
    /// `lim (a^i(I^t) - t d)` for each `i`.
    pub a_limits: Vec<Value>,
    pub rees: ReesPackage,
    pub clauses: Vec<ClauseVerdict>,
    pub trichotomy: Trichotomy,
}

fn av_json(a: AValue) -> Value {
    match a.0 {
        Some(v) => json!(v),
        None => json!("-inf"),
    }
}

/// A lower bound `lower` against a window limit: equality verifies,
/// strictly smaller is consistent, larger fails.
fn compare_lower(limit: Limit, lower: AValue) -> Status {
    match limit.value() {
        None => Status::Skipped,
        Some(v) if v == lower => Status::Verified,
        Some(v) if lower < v => Status::ConsistentLowerBound,
        Some(_) => Status::Failed,
    }
}

/// Runs the direct and the geometric pipelines and compares them clause by clause.
pub fn regpowgeo_crosscheck(
    i: &Submodule,
    t_max: usize,
    samples: usize,
    seed: u64,
    user_points: &[Vec<Coeff>],
    cell_budget: Option<Duration>,
) -> Result<CrossCheck> {
    let rees = rees_package(i, samples, seed, user_points)?;
    let d = rees.degree;
    let table = power_invariants(i, t_max, PowerOptions { saturated: true, cell_budget })?;
    let n = i.ring().nvars();
    let reg_limit = limit_minus(&table.reg_sequence(), d);
    let sat_limit = limit_minus(&table.reg_sat_sequence(), d);
    let a_limits: Vec<Limit> = (0..=n).map(|k| limit_minus(&table.a_sequence(k), d)).collect();
    let delta = rees.delta;
    let mut clauses = Vec::new();

    // (i) saturated regularity against max_{i>=2} a^i(Gamma) + i.
    let geo_i = AValue(rees.a_gamma.iter().enumerate().skip(2).filter_map(|(k, a)| a.0.map(|v| v + k as i64)).max());
    clauses.push(ClauseVerdict {
        clause: "i".into(),
        status: compare_lower(sat_limit, geo_i),
        data: json!({"direct": sat_limit.to_json(), "fibers": av_json(geo_i)}),
    });

    // (ii) each fiber of dimension i-1 bounds the tail of a^i from below.
    let mut ii_status = Status::ConsistentLowerBound;
    let mut ii_data = Vec::new();
    for f in &rees.fibers {
        if f.report.dim < 0 {
            continue;
        }
        let k = (f.report.dim + 1) as usize;
        let z = f.report.a.get(k);
        let lim = a_limits.get(k).copied().unwrap_or(Limit::Unknown);
        let ok = match (lim.value(), z.0) {
            (None, _) => None,
            (Some(l), Some(zv)) => Some(l.0.is_some_and(|lv| lv + k as i64 >= zv + k as i64) && zv + k as i64 >= 0),
            (Some(_), None) => Some(false),
        };
        match ok {
            Some(false) => ii_status = Status::Failed,
            None if ii_status != Status::Failed => ii_status = Status::Skipped,
            _ => {}
        }
        ii_data.push(json!({"i": k, "fiber_a": av_json(z), "limit": lim.to_json()}));
    }
    if rees.fibers.is_empty() {
        ii_status = Status::Skipped;
    }
    clauses.push(ClauseVerdict { clause: "ii".into(), status: ii_status, data: Value::Array(ii_data) });

    // (iii) a^{delta+1} tail equals the fiber maximum.
    let k = (delta + 1).max(0) as usize;
    let lim = a_limits.get(k).copied().unwrap_or(Limit::Unknown);
    let geo = rees.a_gamma.get(k).copied().unwrap_or(AValue::NEG_INF);
    clauses.push(ClauseVerdict {
        clause: "iii".into(),
        status: compare_lower(lim, geo),
        data: json!({"i": k, "direct": lim.to_json(), "fibers": av_json(geo)}),
    });

    // (iv) finite projection.
    let iv = if delta == 0 {
        let tail_rows: Vec<&PowerRow> = table.rows.iter().rev().take(3).collect();
        let reg_is_a1 = tail_rows.iter().all(|r| match (&r.reg, &r.a) {
            (Some(reg), Some(a)) => reg.0.is_some() && reg.0 == a.get(1).0.map(|v| v + 1),
            _ => false,
        });
        let others = a_limits.iter().enumerate().all(|(k, l)| k == 1 || *l == Limit::NegInf);
        let reg_ok = reg_limit == Limit::Finite(rees.freg.0.unwrap_or(i64::MIN));
        let status = if reg_is_a1 && others && reg_ok { Status::Verified } else { Status::Failed };
        ClauseVerdict {
            clause: "iv".into(),
            status,
            data: json!({"freg": av_json(rees.freg), "reg_limit": reg_limit.to_json(), "reg_equals_a1_plus_1": reg_is_a1,
                         "a_limits": a_limits.iter().map(|l| l.to_json()).collect::<Vec<_>>()}),
        }
    } else {
        ClauseVerdict { clause: "iv".into(), status: Status::Skipped, data: json!({"delta": delta}) }
    };
    clauses.push(iv);

    // (v) fibers of dimension at most one.
    let v = if (0..=1).contains(&delta) {
        let vanishing = a_limits.iter().enumerate().all(|(k, l)| k < (delta + 2) as usize || *l == Limit::NegInf);
        let degrees: Vec<Option<num_bigint::BigInt>> =
            rees.fibers.iter().map(|f| f.hilbert.as_ref().and_then(|h| h.newton().last().cloned())).collect();
        let same_degree = degrees.windows(2).all(|w| w[0] == w[1]);
        let status = match reg_limit {
            Limit::Finite(c) if vanishing => {
                let fr = rees.freg.0.unwrap_or(i64::MIN);
                if c == fr {
                    Status::Verified
                } else if fr < c && !(delta == 1 && same_degree) {
                    Status::ConsistentLowerBound
                } else {
                    Status::Failed
                }
            }
            Limit::Unknown => Status::Skipped,
            _ => Status::Failed,
        };
        ClauseVerdict {
            clause: "v".into(),
            status,
            data: json!({"reg_limit": reg_limit.to_json(), "freg": av_json(rees.freg), "same_degree": same_degree,
                         "higher_limits_vanish": vanishing}),
        }
    } else {
        ClauseVerdict { clause: "v".into(), status: Status::Skipped, data: json!({"delta": delta}) }
    };
    clauses.push(v);

    // (vi) fibers whose Hilbert polynomials differ by constants.
    let hps: Vec<Option<&HilbertPolynomial>> = rees.fibers.iter().map(|f| f.hilbert.as_ref()).collect();
    let flat_like = !hps.is_empty()
        && hps.iter().all(|h| h.is_some())
        && hps.windows(2).all(|w| w[0].unwrap().sub(w[1].unwrap()).degree() <= 0);
    let vi = if flat_like {
        ClauseVerdict {
            clause: "vi".into(),
            status: compare_lower(reg_limit, rees.freg),
            data: json!({"reg_limit": reg_limit.to_json(), "freg": av_json(rees.freg)}),
        }
    } else {
        ClauseVerdict { clause: "vi".into(), status: Status::Skipped, data: json!({"flat_like": false}) }
    };
    clauses.push(vi);

    let nonnegative = matches!(sat_limit, Limit::Finite(v) if v >= 0);
    let finite = matches!(sat_limit, Limit::Finite(_));
    let positive = delta > 0;
    let trichotomy = Trichotomy {
        limit: sat_limit.to_json(),
        nonnegative,
        finite,
        positive_dimensional_fiber: positive,
        agrees: sat_limit != Limit::Unknown && nonnegative == finite && finite == positive,
    };
    Ok(CrossCheck {
        d,
        table,
        reg_limit: reg_limit.to_json(),
        sat_limit: sat_limit.to_json(),
        a_limits: a_limits.iter().map(|l| l.to_json()).collect(),
        rees,
        clauses,
        trichotomy,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CelRow {
    pub p: usize,
    pub generators: Vec<String>,
    pub r: AValue,
    pub d: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CelReport {
    pub rows: Vec<CelRow>,
    /// `(p, q, holds)` for every `p + q <= p_max`.
    pub subadditivity: Vec<(usize, usize, bool)>,
    /// `min_p d_p / p`.
    pub slope_estimate: String,
    pub above_slope: bool,
}

/// `(I^p)^sat`, or `I^p : J^inf`, for `p = 1..=p_max`, with its regularity and the
/// least truncation degree recovering it after saturation.
pub fn cel_sequences(i: &Submodule, j: Option<&Submodule>, p_max: usize) -> Result<CelReport> {
    require_nonzero_ideal(i)?;
    if p_max < 2 {
        return Err(Error::InvalidArgument("p_max must be at least 2".into()));
    }
    if let Some(j) = j {
        let dim = j.quotient_dimension()?;
        if dim > 1 {
            return Err(Error::InvalidArgument(format!(
                "the saturating ideal must cut out a scheme finite over the base; A/J has dimension {dim}"
            )));
        }
    }
    let sat = |k: &Submodule| -> Result<Submodule> {
        match j {
            Some(j) => k.saturate(j),
            None => k.saturate_irrelevant(),
        }
    };
    let mut rows = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        budget::check()?;
        let k = sat(&i.power(p as i64)?)?;
        let (r, _) = ideal_invariants(&k)?;
        let degs = k.generator_degrees()?;
        let mut dp = *degs.iter().max().unwrap_or(&0);
        for mu in degs.iter().copied().min().unwrap_or(0)..dp {
            if sat(&k.truncate_below(mu)?)?.equals(&k)? {
                dp = mu;
                break;
            }
        }
        let generators = k.minimal_generators()?.iter().map(|g| g.component(0).to_string()).collect();
        rows.push(CelRow { p, generators, r, d: dp });
    }
    let mut sub = Vec::new();
    for p in 1..=p_max {
        for q in p..=p_max - p {
            if p + q > p_max {
                continue;
            }
            sub.push((p, q, rows[p + q - 1].d <= rows[p - 1].d + rows[q - 1].d));
        }
    }
    let mut s: Option<BigRational> = None;
    for row in &rows {
        let v = BigRational::new(row.d.into(), (row.p as i64).into());
        s = Some(match s {
            Some(cur) if cur <= v => cur,
            _ => v,
        });
    }
    let s = s.unwrap();
    let above = rows.iter().all(|row| BigRational::from_integer(row.d.into()) >= &s * BigRational::from_integer((row.p as i64).into()));
    Ok(CelReport { rows, subadditivity: sub, slope_estimate: s.to_string(), above_slope: above })
}

/// A one-line summary of a cell for tabular output.
pub fn cell(a: &Option<AValue>) -> String {
    match a {
        Some(v) => v.to_string(),
        None => "hole".into(),
    }
}

/// Index `i -> sequence of a^i` for every `i`, convenient for reports.
pub fn a_sequences(table: &PowerTable, n: usize) -> BTreeMap<usize, Vec<Option<AValue>>> {
    (0..=n).map(|k| (k, table.a_sequence(k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;
    use crate::parse::parse_polynomial;

    fn ideal(r: &RingRef, s: &[&str]) -> Submodule {
        let ps: Vec<Polynomial> = s.iter().map(|x| parse_polynomial(r, x).unwrap()).collect();
        Submodule::ideal(r, &ps).unwrap()
    }

    fn seq(v: &[i64]) -> Vec<AValue> {
        v.iter().map(|&x| AValue(Some(x))).collect()
    }

    #[test]
    fn tails() {
        let t = linear_tail(&seq(&[3, 5, 7, 9])).unwrap();
        assert_eq!((t.slope, t.intercept, t.stable_from, t.confirmed), (2, 1, 1, true));
        let t = linear_tail(&seq(&[0, 5, 7, 9, 11])).unwrap();
        assert_eq!((t.slope, t.stable_from, t.confirmed), (2, 2, true));
        let t = linear_tail(&[AValue::NEG_INF; 5]).unwrap();
        assert!(t.identically_neg_inf);
        assert!(linear_tail(&seq(&[1, 2, 3])).is_err());
        let t = linear_tail(&seq(&[1, 4, 6, 9])).unwrap();
        assert!(!t.confirmed);
    }

    #[test]
    fn reduction_degrees() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let d = reduction_degree(&ideal(&r, &["x^2", "x*y"]), None, 4).unwrap();
        assert_eq!((d.d, d.p_witness, d.exact), (2, 0, true));
        let d = reduction_degree(&ideal(&r, &["x^3", "x^2*y", "y^3"]), None, 4).unwrap();
        assert_eq!(d.d, 3);
        let z = Submodule::zero(&crate::module::FreeModule::new(&r, vec![0]));
        assert!(reduction_degree(&z, None, 4).is_err());
        // (x^2) is never a reduction of (x^2, x*y^2) but has the same support.
        let d = reduction_degree(&ideal(&r, &["x^2", "x*y^2"]), None, 4).unwrap();
        assert_eq!((d.d, d.exact), (3, false));
    }

    #[test]
    fn powers_of_square_of_maximal_ideal() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let t = power_invariants(&ideal(&r, &["x^2", "x*y", "y^2"]), 4, PowerOptions::default()).unwrap();
        let regs: Vec<i64> = t.rows.iter().map(|r| r.reg.unwrap().0.unwrap()).collect();
        assert_eq!(regs, vec![2, 4, 6, 8]);
        assert!(t.holes.is_empty());
        assert_eq!(limit_minus(&t.reg_sequence(), 2), Limit::Finite(0));
    }

    #[test]
    fn kodiyalam_on_square() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y"]).unwrap();
        let k = kodiyalam_check(&ideal(&r, &["x^2", "x*y", "y^2"]), None, 3).unwrap();
        assert!(k.iter().all(|(t, end, bound, ok)| *ok && *end == 2 * *t as i64 && end == bound));
    }

    #[test]
    fn rees_of_two_squares() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y", "z"]).unwrap();
        let p = rees_package(&ideal(&r, &["x^2", "y^2"]), 3, 1, &[]).unwrap();
        assert_eq!(p.rees_ideal.len(), 1);
        assert!(p.image_ideal.is_empty());
        assert_eq!(p.delta, 1);
        for f in &p.fibers {
            assert_eq!((f.report.dim, f.report.reg, f.report.a.get(2)), (1, AValue(Some(1)), AValue(Some(-1))));
        }
        assert!(rees_package(&ideal(&r, &["x^2", "y^3"]), 1, 1, &[]).is_err());
    }

    #[test]
    fn cel_two_squares() {
        let r = Ring::standard(Field::Prime(32003), &["x", "y", "z"]).unwrap();
        let i = ideal(&r, &["x^2", "y^2"]);
        let c = cel_sequences(&i, None, 3).unwrap();
        assert_eq!(c.rows.iter().map(|r| r.d).collect::<Vec<_>>(), vec![2, 4, 6]);
        assert!(c.subadditivity.iter().all(|x| x.2));
        assert!(cel_sequences(&i, Some(&ideal(&r, &["z"])), 3).is_err());
        let j = ideal(&r, &["x", "z"]);
        assert!(cel_sequences(&i, Some(&j), 2).is_ok());
    }
}
