//! Hilbert series `N(z) / prod (1 - z^w)` and the data derived from them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{Exp, Ring};

/// A rational function with denominator `prod_i (1 - z^{w_i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    weights: Vec<u32>,
    numerator: BTreeMap<i64, i128>,
}

fn clean(mut m: BTreeMap<i64, i128>) -> BTreeMap<i64, i128> {
    m.retain(|_, c| *c != 0);
    m
}

impl HilbertSeries {
    pub fn new(weights: Vec<u32>, numerator: BTreeMap<i64, i128>) -> Self {
        let mut weights = weights;
        weights.sort_unstable();
        HilbertSeries { weights, numerator: clean(numerator) }
    }

    pub fn zero(weights: Vec<u32>) -> Self {
        Self::new(weights, BTreeMap::new())
    }

    /// Series of the free module with the given basis degrees over a ring
    /// with these variable weights.
    pub fn free(weights: Vec<u32>, twists: &[i64]) -> Self {
        let mut num = BTreeMap::new();
        for &t in twists {
            *num.entry(t).or_insert(0) += 1;
        }
        Self::new(weights, num)
    }

    /// Weights of a ring without base variables.
    pub fn ring_weights(ring: &Ring) -> Result<Vec<u32>> {
        if ring.has_base() {
            return Err(Error::Unsupported(
                "Hilbert series over a ring with degree-zero variables".into(),
            ));
        }
        Ok(ring.weights().to_vec())
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn numerator(&self) -> &BTreeMap<i64, i128> {
        &self.numerator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    fn combine(&self, other: &HilbertSeries, sign: i128) -> Result<HilbertSeries> {
        if self.weights != other.weights {
            return Err(Error::InvalidArgument("Hilbert series with different denominators".into()));
        }
        let mut num = self.numerator.clone();
        for (&k, &c) in &other.numerator {
            *num.entry(k).or_insert(0) += sign * c;
        }
        Ok(HilbertSeries { weights: self.weights.clone(), numerator: clean(num) })
    }

    pub fn add(&self, other: &HilbertSeries) -> Result<HilbertSeries> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &HilbertSeries) -> Result<HilbertSeries> {
        self.combine(other, -1)
    }

    /// Multiplies by `z^k` (the series of `M(-k)`).
    pub fn shift(&self, k: i64) -> HilbertSeries {
        HilbertSeries {
            weights: self.weights.clone(),
            numerator: self.numerator.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Lowest degree of a nonzero homogeneous piece.
    pub fn indeg(&self) -> Option<i64> {
        self.numerator.keys().next().copied()
    }

    fn dense_numerator(&self) -> (i64, Vec<i128>) {
        let lo = *self.numerator.keys().next().unwrap_or(&0);
        let hi = *self.numerator.keys().next_back().unwrap_or(&0);
        let mut v = vec![0i128; (hi - lo + 1).max(1) as usize];
        for (&e, &c) in &self.numerator {
            v[(e - lo) as usize] = c;
        }
        (lo, v)
    }

    /// Order of vanishing of the numerator at `z = 1`.
    fn order_at_one(&self) -> (usize, Vec<i128>) {
        let (_, mut v) = self.dense_numerator();
        let mut ord = 0;
        loop {
            let s: i128 = v.iter().sum();
            if s != 0 || v.iter().all(|&c| c == 0) {
                return (ord, v);
            }
            // divide by (1 - z): q_k = sum_{j<=k} v_j
            let mut q = Vec::with_capacity(v.len() - 1);
            let mut acc = 0i128;
            for &c in &v[..v.len() - 1] {
                acc += c;
                q.push(acc);
            }
            v = q;
            ord += 1;
        }
    }

    /// Krull dimension, `-1` for the zero module.
    pub fn dimension(&self) -> i64 {
        if self.is_zero() {
            return -1;
        }
        self.weights.len() as i64 - self.order_at_one().0 as i64
    }

    /// Hilbert function values for degrees `lo..=hi`.
    pub fn function(&self, lo: i64, hi: i64) -> Vec<i128> {
        if hi < lo {
            return Vec::new();
        }
        let Some(start) = self.indeg() else { return vec![0; (hi - lo + 1) as usize] };
        let base = start.min(lo);
        let len = (hi - base + 1) as usize;
        let mut series = vec![0i128; len];
        for (&e, &c) in &self.numerator {
            if e <= hi {
                series[(e - base) as usize] += c;
            }
        }
        for &w in &self.weights {
            let w = w as usize;
            for k in w..len {
                series[k] += series[k - w];
            }
        }
        series[(lo - base) as usize..].to_vec()
    }

    pub fn value(&self, mu: i64) -> i128 {
        self.function(mu, mu)[0]
    }

    /// The series as a Laurent polynomial, available for finite-length modules.
    pub fn polynomial_part(&self) -> Result<BTreeMap<i64, i128>> {
        if self.dimension() > 0 {
            return Err(Error::InfiniteLength);
        }
        let (lo, mut v) = self.dense_numerator();
        for &w in &self.weights {
            let w = w as usize;
            // exact division by (1 - z^w)
            let mut q = vec![0i128; v.len().saturating_sub(w)];
            let mut rem = v.clone();
            for k in 0..q.len() {
                q[k] = rem[k];
                rem[k + w] += rem[k];
                rem[k] = 0;
            }
            if rem.iter().any(|&c| c != 0) {
                return Err(Error::Verification("non-exact division in Hilbert series".into()));
            }
            v = q;
        }
        Ok(clean(v.into_iter().enumerate().map(|(k, c)| (lo + k as i64, c)).collect()))
    }

    /// Top degree of a nonzero piece of a finite-length module.
    pub fn end(&self) -> Result<Option<i64>> {
        Ok(self.polynomial_part()?.keys().next_back().copied())
    }

    /// Hilbert polynomial; standard grading only.
    pub fn hilbert_polynomial(&self) -> Result<HilbertPolynomial> {
        if self.weights.iter().any(|&w| w != 1) {
            return Err(Error::Unsupported("Hilbert polynomial for non-standard weights".into()));
        }
        let d = self.dimension();
        if d <= 0 {
            return Ok(HilbertPolynomial { newton: Vec::new() });
        }
        let (ord, h) = self.order_at_one();
        debug_assert_eq!(self.weights.len() as i64 - ord as i64, d);
        let (lo, _) = self.dense_numerator();
        let d = d as usize;
        // values at mu = 0..d-1 of sum_k h_k C(mu - k + d - 1, d - 1)
        let values: Vec<BigInt> = (0..d as i64)
            .map(|mu| {
                h.iter()
                    .enumerate()
                    .map(|(k, &c)| BigInt::from(c) * binom_poly(mu - (lo + k as i64) + d as i64 - 1, d - 1))
                    .sum()
            })
            .collect();
        let mut newton = Vec::with_capacity(d);
        let mut row = values;
        for _ in 0..d {
            newton.push(row[0].clone());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        Ok(HilbertPolynomial { newton })
    }
}

/// `x (x-1) ... (x-r+1) / r!` for any integer `x`.
fn binom_poly(x: i64, r: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..r as i64 {
        num *= BigInt::from(x - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// An integer-valued polynomial in the Newton basis: `P(mu) = sum_i c_i C(mu, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    newton: Vec<BigInt>,
}

impl HilbertPolynomial {
    pub fn from_newton(mut newton: Vec<BigInt>) -> Self {
        while newton.last().is_some_and(|c| c.is_zero()) {
            newton.pop();
        }
        HilbertPolynomial { newton }
    }

    pub fn newton(&self) -> &[BigInt] {
        &self.newton
    }

    pub fn is_zero(&self) -> bool {
        self.newton.iter().all(|c| c.is_zero())
    }

    /// Degree, `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.newton.iter().rposition(|c| !c.is_zero()).map_or(-1, |d| d as i64)
    }

    pub fn eval(&self, mu: i64) -> BigInt {
        self.newton.iter().enumerate().map(|(i, c)| c * binom_poly(mu, i)).sum()
    }

    pub fn sub(&self, other: &HilbertPolynomial) -> HilbertPolynomial {
        let n = self.newton.len().max(other.newton.len());
        let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        Self::from_newton((0..n).map(|i| get(&self.newton, i) - get(&other.newton, i)).collect())
    }

    /// Coefficients in the monomial basis, constant term first.
    pub fn monomial_coefficients(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = vec![BigRational::zero(); self.newton.len()];
        for (i, c) in self.newton.iter().enumerate() {
            // C(mu, i) = prod_{j<i} (mu - j) / i!
            let mut poly = vec![BigRational::one()];
            for j in 0..i {
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (k, a) in poly.iter().enumerate() {
                    next[k + 1] += a;
                    next[k] -= a * BigRational::from_integer(BigInt::from(j));
                }
                poly = next;
            }
            let fact: BigInt = (1..=i as i64).map(BigInt::from).product();
            for (k, a) in poly.into_iter().enumerate() {
                out[k] += a * BigRational::new(c.clone(), fact.clone());
            }
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.monomial_coefficients();
        if c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a < &BigRational::zero();
            let mag = if neg { -a.clone() } else { a.clone() };
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

type Mono = Vec<Exp>;

fn divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimize(mut gens: Vec<Mono>) -> Vec<Mono> {
    gens.sort_by_key(|g| g.iter().map(|&e| e as u32).sum::<u32>());
    gens.dedup();
    let mut out: Vec<Mono> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out
}

fn poly_mul(a: &BTreeMap<i64, i128>, b: &BTreeMap<i64, i128>) -> BTreeMap<i64, i128> {
    let mut out = BTreeMap::new();
    for (&i, &x) in a {
        for (&j, &y) in b {
            *out.entry(i + j).or_insert(0) += x * y;
        }
    }
    clean(out)
}

/// Numerator of `k[x] / J` over the denominator `prod (1 - z^{w_i})` for a
/// monomial ideal `J`, by pivot recursion
/// `N(J) = N(J + p) + z^{deg p} N(J : p)`.
pub fn monomial_numerator(weights: &[u32], gens: &[Mono]) -> BTreeMap<i64, i128> {
    numerator_rec(weights, minimize(gens.to_vec()))
}

fn numerator_rec(weights: &[u32], gens: Vec<Mono>) -> BTreeMap<i64, i128> {
    let deg = |m: &Mono| -> i64 { m.iter().zip(weights).map(|(&e, &w)| e as i64 * w as i64).sum() };
    if gens.is_empty() {
        return BTreeMap::from([(0, 1)]);
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return BTreeMap::new();
    }
    let mixed: Vec<&Mono> = gens.iter().filter(|g| g.iter().filter(|&&e| e > 0).count() > 1).collect();
    if mixed.is_empty() {
        let mut out = BTreeMap::from([(0i64, 1i128)]);
        for g in &gens {
            out = poly_mul(&out, &BTreeMap::from([(0, 1), (deg(g), -1)]));
        }
        return out;
    }
    // pivot: the variable occurring in most mixed generators, at its
    // smallest positive exponent among them
    let nv = weights.len();
    let mut best = (0usize, 0usize);
    for v in 0..nv {
        let count = mixed.iter().filter(|g| g[v] > 0).count();
        if count > best.0 {
            best = (count, v);
        }
    }
    let v = best.1;
    let e = mixed.iter().filter(|g| g[v] > 0).map(|g| g[v]).min().unwrap();
    let mut pivot = vec![0 as Exp; nv];
    pivot[v] = e;
    let mut plus = gens.clone();
    plus.push(pivot.clone());
    let colon: Vec<Mono> = gens
        .iter()
        .map(|g| {
            let mut h = g.clone();
            h[v] = h[v].saturating_sub(e);
            h
        })
        .collect();
    let a = numerator_rec(weights, minimize(plus));
    let b = numerator_rec(weights, minimize(colon));
    let shift = deg(&pivot);
    let mut out = a;
    for (k, c) in b {
        *out.entry(k + shift).or_insert(0) += c;
    }
    clean(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn count_standard(gens: &[Mono], nv: usize, deg: u32) -> i128 {
        fn rec(prefix: &mut Vec<Exp>, nv: usize, left: u32, gens: &[Mono], acc: &mut i128) {
            if prefix.len() == nv - 1 {
                prefix.push(left as Exp);
                if !gens.iter().any(|g| divides(g, prefix)) {
                    *acc += 1;
                }
                prefix.pop();
                return;
            }
            for e in 0..=left {
                prefix.push(e as Exp);
                rec(prefix, nv, left - e, gens, acc);
                prefix.pop();
            }
        }
        let mut acc = 0;
        rec(&mut Vec::new(), nv, deg, gens, &mut acc);
        acc
    }

    #[test]
    fn plane_series() {
        let hs = HilbertSeries::new(vec![1, 1], monomial_numerator(&[1, 1], &[]));
        assert_eq!(hs.function(0, 3), vec![1, 2, 3, 4]);
        assert_eq!(hs.dimension(), 2);
    }

    #[test]
    fn two_quadrics_in_three_variables() {
        let n = monomial_numerator(&[1, 1, 1], &[vec![2, 0, 0], vec![0, 2, 0]]);
        let hs = HilbertSeries::new(vec![1, 1, 1], n);
        assert_eq!(hs.dimension(), 1);
        assert_eq!(hs.function(0, 4), vec![1, 3, 4, 4, 4]);
        let hp = hs.hilbert_polynomial().unwrap();
        assert_eq!(hp.to_string(), "4");
    }

    #[test]
    fn end_of_artinian_quotient() {
        let n = monomial_numerator(&[1, 1], &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        let hs = HilbertSeries::new(vec![1, 1], n);
        assert_eq!(hs.end().unwrap(), Some(1));
        let n = monomial_numerator(&[1, 1], &[vec![1, 0]]);
        assert_eq!(HilbertSeries::new(vec![1, 1], n).end(), Err(Error::InfiniteLength));
    }

    #[test]
    fn weighted_polynomial_refused() {
        let hs = HilbertSeries::free(vec![1, 2], &[0]);
        assert!(hs.hilbert_polynomial().is_err());
        assert_eq!(hs.function(0, 4), vec![1, 1, 2, 2, 3]);
    }

    #[test]
    fn plane_conic_polynomial() {
        let n = monomial_numerator(&[1, 1, 1], &[vec![2, 0, 0]]);
        let hp = HilbertSeries::new(vec![1, 1, 1], n).hilbert_polynomial().unwrap();
        assert_eq!(hp.to_string(), "2*t+1");
        assert_eq!(hp.degree(), 1);
    }

    proptest! {
        #[test]
        fn series_matches_monomial_count(gens in proptest::collection::vec(proptest::collection::vec(0u16..4, 3), 0..5)) {
            let n = monomial_numerator(&[1, 1, 1], &gens);
            let hs = HilbertSeries::new(vec![1, 1, 1], n);
            let vals = hs.function(0, 12);
            for d in 0..=12u32 {
                prop_assert_eq!(vals[d as usize], count_standard(&gens, 3, d));
            }
            if hs.dimension() > 0 {
                let hp = hs.hilbert_polynomial().unwrap();
                prop_assert_eq!(BigInt::from(vals[12]), hp.eval(12));
            }
        }

        #[test]
        fn dimension_matches_subset_search(gens in proptest::collection::vec(proptest::collection::vec(0u16..3, 5), 1..5)) {
            let n = monomial_numerator(&[1; 5], &gens);
            let hs = HilbertSeries::new(vec![1; 5], n);
            // largest set of variables containing no generator's support
            let mut best = -1i64;
            for mask in 0u32..32 {
                let free = |g: &Mono| g.iter().enumerate().all(|(i, &e)| e == 0 || mask & (1 << i) != 0);
                if !gens.iter().any(free) {
                    best = best.max(mask.count_ones() as i64);
                }
            }
            prop_assert_eq!(hs.dimension(), best);
        }
    }
}
