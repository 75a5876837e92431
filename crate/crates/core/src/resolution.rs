//! Minimal graded free resolutions.
//!
//! A Schreyer frame is built level by level (each level is a Gröbner basis
//! of the previous syzygies in the induced order), turned into polynomial
//! matrices and then pruned of unit entries.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::budget;
use crate::error::{Error, Result};
use crate::hilbert::HilbertSeries;
use crate::ideal::Submodule;
use crate::matrix::Matrix;
use crate::module::{FreeModule, FreeModuleRef, ModuleOrder, SchreyerFrame, VTerm, Vector};
use crate::poly::Polynomial;
use crate::ring::{Monomial, RingRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseMode {
    /// Units are the nonzero constants.
    Field,
    /// Degree-zero variables are coordinates of a local ring at the origin:
    /// units are entries free of positive-weight variables that do not
    /// vanish at the origin.
    Local,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    ring: RingRef,
    mode: BaseMode,
    twists: Vec<Vec<i64>>,
    maps: Vec<Matrix>,
}

/// One level of the Schreyer frame: monic vectors in the previous free module.
struct Level {
    module: FreeModuleRef,
    elems: Vec<Vector>,
}

fn sort_level(elems: &mut [Vector], var: usize) {
    elems.sort_by(|a, b| {
        let (x, y) = (a.lead().unwrap(), b.lead().unwrap());
        x.comp.cmp(&y.comp).then(x.mon.exp(var).cmp(&y.mon.exp(var)))
    });
}

fn frame_for(prev: Option<&SchreyerFrame>, base: &FreeModuleRef, elems: &[Vector], ring: &RingRef) -> SchreyerFrame {
    let mut lead = Vec::with_capacity(elems.len());
    let mut base_comp = Vec::with_capacity(elems.len());
    let mut chain = Vec::with_capacity(elems.len());
    for (i, v) in elems.iter().enumerate() {
        let t = v.lead().unwrap();
        match prev {
            None => {
                lead.push(t.mon.clone());
                base_comp.push(t.comp);
                chain.push(vec![i as u32]);
            }
            Some(p) => {
                lead.push(t.mon.mul(&p.lead[t.comp]));
                base_comp.push(p.base_comp[t.comp]);
                let mut c = p.chain[t.comp].clone();
                c.push(i as u32);
                chain.push(c);
            }
        }
    }
    let _ = ring;
    SchreyerFrame { base: base.clone(), lead, base_comp, chain }
}

/// Syzygies of a level, one per minimal generator of each monomial ideal
/// `(lcm(L_i, L_j) / L_j : i < j)`.
fn next_level(level: &Level, target: &FreeModuleRef) -> Result<Vec<Vector>> {
    let ring = target.ring().clone();
    let field = ring.field().clone();
    let g = &level.elems;
    let leads: Vec<(Monomial, usize)> = g.iter().map(|v| {
        let t = v.lead().unwrap();
        (t.mon.clone(), t.comp)
    }).collect();
    let mut out = Vec::new();
    for j in 0..g.len() {
        let mut quots: Vec<(usize, Monomial)> = Vec::new();
        for i in 0..j {
            if leads[i].1 != leads[j].1 {
                continue;
            }
            let l = ring.lcm(&leads[i].0, &leads[j].0);
            quots.push((i, leads[j].0.quotient_of(&l).unwrap()));
        }
        let mut minimal: Vec<(usize, Monomial)> = Vec::new();
        for (k, (i, m)) in quots.iter().enumerate() {
            let dominated = quots.iter().enumerate().any(|(k2, (_, m2))| {
                k2 != k && m2.divides(m) && (m2 != m || k2 < k)
            });
            if !dominated {
                minimal.push((*i, m.clone()));
            }
        }
        for (i, mij) in minimal {
            budget::check()?;
            let l = mij.mul(&leads[j].0);
            let mji = leads[i].0.quotient_of(&l).unwrap();
            let one = field.one();
            let minus = field.neg(&one);
            let mut h = g[j].mul_term(&mij, &one).axpy(&minus, &g[i].mul_term(&mji, &one));
            let mut terms = vec![
                VTerm { mon: mij.clone(), comp: j, coeff: one.clone() },
                VTerm { mon: mji, comp: i, coeff: minus.clone() },
            ];
            while let Some(t) = h.lead().cloned() {
                let Some(k) = (0..g.len()).find(|&k| leads[k].1 == t.comp && leads[k].0.divides(&t.mon))
                else {
                    return Err(Error::Verification("Schreyer reduction left a remainder".into()));
                };
                let q = leads[k].0.quotient_of(&t.mon).unwrap();
                h = h.axpy(&field.neg(&t.coeff), &g[k].mul_term(&q, &one));
                terms.push(VTerm { mon: q, comp: k, coeff: field.neg(&t.coeff) });
            }
            let s = Vector::from_terms(target, terms);
            debug_assert_eq!(s.lead().unwrap().comp, j);
            out.push(s);
        }
    }
    Ok(out)
}

fn is_unit(p: &Polynomial, mode: BaseMode) -> bool {
    if p.is_zero() {
        return false;
    }
    match mode {
        BaseMode::Field => p.is_constant(),
        BaseMode::Local => {
            let ring = p.ring();
            let pos = ring.positive_vars();
            p.terms().iter().all(|t| pos.iter().all(|&v| t.mon.exp(v) == 0)) && !p.constant_term().is_zero()
        }
    }
}

impl Resolution {
    /// Minimal free resolution of `F / U`, `U` the given submodule.
    pub fn of_quotient(pres: &Submodule, mode: BaseMode) -> Result<Resolution> {
        let raw = Self::schreyer(pres)?;
        let mut res = Resolution { mode, ..raw };
        if mode == BaseMode::Local {
            let ring = &res.ring;
            if !ring.has_base() || !ring.is_local_base() {
                return Err(Error::InvalidArgument("local mode needs a ring declared local over base variables".into()));
            }
        }
        res.minimalize()?;
        Ok(res)
    }

    /// Resolution of the submodule `U` itself (the tail of that of `F / U`).
    pub fn of_submodule(pres: &Submodule, mode: BaseMode) -> Result<Resolution> {
        Ok(Self::of_quotient(pres, mode)?.tail())
    }

    /// The non-minimal Schreyer resolution, in field mode.
    pub fn schreyer(pres: &Submodule) -> Result<Resolution> {
        pres.require_homogeneous()?;
        let ring = pres.ring().clone();
        let f0 = FreeModule::new(&ring, pres.ambient().twists().to_vec());
        let gens: Vec<Vector> = pres.gens().iter().map(|v| v.rebase(&f0)).collect();
        let sub = Submodule::new(&f0, gens)?;
        let mut g1: Vec<Vector> = sub.gb()?.elements().to_vec();
        sort_level(&mut g1, 0);
        let nv = ring.nvars();
        let mut twists = vec![f0.twists().to_vec()];
        let mut maps = Vec::new();
        let mut level = Level { module: f0.clone(), elems: g1 };
        let mut frame: Option<Arc<SchreyerFrame>> = None;
        let mut k = 1;
        while !level.elems.is_empty() {
            if k > nv + 2 {
                return Err(Error::Verification("resolution did not terminate within the variable bound".into()));
            }
            let tw: Vec<i64> = level.elems.iter().map(|v| v.degree().expect("homogeneous")).collect();
            let rows = level.module.rank();
            maps.push(Matrix::from_columns(&ring, rows, &level.elems));
            twists.push(tw.clone());
            let fr = Arc::new(frame_for(frame.as_deref(), &f0, &level.elems, &ring));
            let fk = FreeModule::with_order(&ring, tw, ModuleOrder::Schreyer(fr.clone()));
            let mut next = next_level(&level, &fk)?;
            sort_level(&mut next, k % nv);
            frame = Some(fr);
            level = Level { module: fk, elems: next };
            k += 1;
        }
        Ok(Resolution { ring, mode: BaseMode::Field, twists, maps })
    }

    fn minimalize(&mut self) -> Result<()> {
        let mode = self.mode;
        let field = self.ring.field().clone();
        for j in 0..self.maps.len() {
            loop {
                budget::check()?;
                let m = &self.maps[j];
                let mut pivot: Option<(usize, usize)> = None;
                'search: for want_const in [true, false] {
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            let e = m.get(r, c);
                            if is_unit(e, mode) && (!want_const || e.is_constant()) {
                                pivot = Some((r, c));
                                break 'search;
                            }
                        }
                    }
                }
                let Some((r, c)) = pivot else { break };
                let e = self.maps[j].get(r, c).clone();
                let cols = self.maps[j].cols();
                if e.is_constant() {
                    let inv = field.inv(&e.constant_term());
                    for c2 in 0..cols {
                        if c2 == c {
                            continue;
                        }
                        let a = self.maps[j].get(r, c2).clone();
                        if a.is_zero() {
                            continue;
                        }
                        let b = a.scale(&field.neg(&inv));
                        self.maps[j].combine_columns(c2, &Polynomial::one(&self.ring), c, &b)?;
                    }
                } else {
                    // Fraction-free: every other column is scaled by the unit so that
                    // the basis change stays uniform on the rest of the complex.
                    for c2 in 0..cols {
                        if c2 == c {
                            continue;
                        }
                        let a = self.maps[j].get(r, c2).neg();
                        self.maps[j].combine_columns(c2, &e, c, &a)?;
                    }
                }
                self.maps[j].remove_row(r);
                self.maps[j].remove_col(c);
                self.twists[j].remove(r);
                self.twists[j + 1].remove(c);
                if j + 1 < self.maps.len() {
                    self.maps[j + 1].remove_row(c);
                }
                if j > 0 {
                    self.maps[j - 1].remove_col(r);
                }
            }
        }
        while self.twists.len() > 1 && self.twists.last().unwrap().is_empty() {
            self.twists.pop();
            self.maps.pop();
        }
        Ok(())
    }

    /// Drops `F_0`, giving a resolution of the image of `d_1`.
    pub fn tail(&self) -> Resolution {
        if self.maps.is_empty() {
            return Resolution { ring: self.ring.clone(), mode: self.mode, twists: vec![Vec::new()], maps: Vec::new() };
        }
        Resolution {
            ring: self.ring.clone(),
            mode: self.mode,
            twists: self.twists[1..].to_vec(),
            maps: self.maps[1..].to_vec(),
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn mode(&self) -> BaseMode {
        self.mode
    }

    /// Basis degrees of `F_j`.
    pub fn twists(&self, j: usize) -> &[i64] {
        self.twists.get(j).map_or(&[], |v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.iter().all(|t| t.is_empty())
    }

    /// `d_j : F_j -> F_{j-1}` for `j >= 1`.
    pub fn map(&self, j: usize) -> Option<&Matrix> {
        if j == 0 {
            return None;
        }
        self.maps.get(j - 1)
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn free_module(&self, j: usize) -> FreeModuleRef {
        FreeModule::new(&self.ring, self.twists(j).to_vec())
    }

    /// Projective dimension; `-1` for the zero module.
    pub fn pd(&self) -> i64 {
        self.twists.iter().rposition(|t| !t.is_empty()).map_or(-1, |j| j as i64)
    }

    pub fn betti(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (j, tw) in self.twists.iter().enumerate() {
            for &mu in tw {
                *entries.entry((j, mu)).or_insert(0) += 1;
            }
        }
        BettiTable { entries, n: self.ring.n() as i64, sigma: self.ring.sigma() }
    }

    /// `d_{j-1} d_j = 0` for all `j`.
    pub fn is_complex(&self) -> Result<bool> {
        for w in self.maps.windows(2) {
            if !w[0].mul(&w[1])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// No unit entries remain.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| {
            (0..m.rows()).all(|r| (0..m.cols()).all(|c| !is_unit(m.get(r, c), self.mode)))
        })
    }

    /// Alternating sum of the Hilbert series of the free modules.
    pub fn euler_series(&self) -> Result<HilbertSeries> {
        let weights = HilbertSeries::ring_weights(&self.ring)?;
        let mut acc = HilbertSeries::zero(weights.clone());
        for (j, tw) in self.twists.iter().enumerate() {
            let f = HilbertSeries::free(weights.clone(), tw);
            acc = if j % 2 == 0 { acc.add(&f)? } else { acc.sub(&f)? };
        }
        Ok(acc)
    }

    /// Applies a ring map entrywise (used to specialize base coordinates);
    /// the result is a complex but generally no longer a resolution.
    pub fn map_complex(&self, target: &RingRef, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Resolution> {
        let maps = self.maps.iter().map(|m| m.map(target, &f)).collect::<Result<Vec<_>>>()?;
        Ok(Resolution { ring: target.clone(), mode: BaseMode::Field, twists: self.twists.clone(), maps })
    }

    /// Image of `d_j` as a submodule of `F_{j-1}` (columns).
    pub fn image(&self, j: usize) -> Result<Submodule> {
        let target = self.free_module(j - 1);
        let cols = match self.map(j) {
            Some(m) => m.columns(&target),
            None => Vec::new(),
        };
        Submodule::new(&target, cols)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, i64), u64>,
    n: i64,
    sigma: i64,
}

impl BettiTable {
    pub fn get(&self, j: usize, mu: i64) -> u64 {
        self.entries.get(&(j, mu)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, i64), u64> {
        &self.entries
    }

    /// Largest twist in homological degree `j`.
    pub fn b(&self, j: usize) -> Option<i64> {
        self.entries.keys().filter(|(k, _)| *k == j).map(|(_, mu)| *mu).max()
    }

    pub fn pd(&self) -> i64 {
        self.entries.keys().map(|(j, _)| *j as i64).max().unwrap_or(-1)
    }

    pub fn rank(&self, j: usize) -> u64 {
        self.entries.iter().filter(|((k, _), _)| *k == j).map(|(_, c)| c).sum()
    }

    /// `max_j (b_j - j) + n - sigma`; `None` for the zero module.
    pub fn regularity(&self) -> Option<i64> {
        self.entries.keys().map(|(j, mu)| mu - *j as i64).max().map(|r| r + self.n - self.sigma)
    }

    /// Map `"j,mu" -> count`.
    pub fn to_map(&self) -> BTreeMap<String, u64> {
        self.entries.iter().map(|((j, mu), c)| (format!("{j},{mu}"), *c)).collect()
    }
}

impl fmt::Display for BettiTable {
    /// Staircase layout: column `j`, row `mu - j`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return writeln!(f, "0");
        }
        let pd = self.pd() as usize;
        let rows: Vec<i64> = {
            let lo = self.entries.keys().map(|(j, mu)| mu - *j as i64).min().unwrap();
            let hi = self.entries.keys().map(|(j, mu)| mu - *j as i64).max().unwrap();
            (lo..=hi).collect()
        };
        let width = self.entries.values().map(|c| c.to_string().len()).max().unwrap().max(pd.to_string().len()) + 1;
        write!(f, "{:>6}", "")?;
        for j in 0..=pd {
            write!(f, "{:>width$}", j)?;
        }
        writeln!(f)?;
        write!(f, "{:>6}", "total:")?;
        for j in 0..=pd {
            write!(f, "{:>width$}", self.rank(j))?;
        }
        writeln!(f)?;
        for row in rows {
            write!(f, "{:>6}", format!("{row}:"))?;
            for j in 0..=pd {
                let c = self.get(j, row + j as i64);
                if c == 0 {
                    write!(f, "{:>width$}", ".")?;
                } else {
                    write!(f, "{:>width$}", c)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
