//! Deterministic sampling of coefficients, points and forms.
//!
//! Every sampled object draws from a ChaCha8 stream: the key is derived
//! from the 64-bit user seed (`seed_from_u64`, which expands it with
//! PCG32) and the stream number is the index of the point or trial. The
//! same `(seed, index)` pair therefore yields the same draws on every
//! platform and regardless of the order in which points are processed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Coeff, Field};
use crate::poly::{Polynomial, Term};
use crate::ring::{Exps, RingRef};

/// Magnitude bound for random rational coefficients.
const RATIONAL_RANGE: i64 = 100;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_coeff(field: &Field, rng: &mut ChaCha8Rng) -> Coeff {
    match field {
        Field::Prime(p) => Coeff::Modular(rng.gen_range(0..*p)),
        Field::Rational => field.from_i64(rng.gen_range(-RATIONAL_RANGE..=RATIONAL_RANGE)),
    }
}

pub fn random_nonzero_coeff(field: &Field, rng: &mut ChaCha8Rng) -> Coeff {
    loop {
        let c = random_coeff(field, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn random_point(field: &Field, len: usize, rng: &mut ChaCha8Rng) -> Vec<Coeff> {
    (0..len).map(|_| random_coeff(field, rng)).collect()
}

/// All monomials of weighted degree `deg` in the given variables.
pub fn monomials_of_degree(ring: &RingRef, vars: &[usize], deg: i64) -> Vec<Exps> {
    fn rec(ring: &RingRef, vars: &[usize], k: usize, left: i64, cur: &mut Exps, out: &mut Vec<Exps>) {
        if k == vars.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = ring.weight(vars[k]) as i64;
        if w == 0 {
            rec(ring, vars, k + 1, left, cur, out);
            return;
        }
        let mut e = 0;
        while e * w <= left {
            cur[vars[k]] = e as u16;
            rec(ring, vars, k + 1, left - e * w, cur, out);
            e += 1;
        }
        cur[vars[k]] = 0;
    }
    let mut out = Vec::new();
    if deg < 0 {
        return out;
    }
    let mut cur: Exps = smallvec::SmallVec::from_elem(0, ring.nvars());
    rec(ring, vars, 0, deg, &mut cur, &mut out);
    out
}

/// A form of degree `deg` in the positive-weight variables with random coefficients.
pub fn random_form(ring: &RingRef, deg: i64, rng: &mut ChaCha8Rng) -> Polynomial {
    let vars = ring.positive_vars();
    let terms = monomials_of_degree(ring, &vars, deg)
        .into_iter()
        .map(|e| Term { mon: ring.monomial(e), coeff: random_coeff(ring.field(), rng) })
        .collect();
    Polynomial::from_terms(ring, terms)
}
