//! Exact coefficient fields: the rationals and prime fields `F_p`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The default characteristic used throughout the engine.
pub const DEFAULT_PRIME: u32 = 32003;

/// A coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

/// A field element. Rationals are kept reduced with a positive denominator
/// (guaranteed by `BigRational`); residues always lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rational(Box<BigRational>),
    Modular(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::InvalidRing(format!("modulus {p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rational => Coeff::Rational(Box::new(BigRational::zero())),
            Field::Prime(_) => Coeff::Modular(0),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            Field::Rational => Coeff::Rational(Box::new(BigRational::from_integer(BigInt::from(n)))),
            Field::Prime(p) => Coeff::Modular(n.rem_euclid(*p as i64) as u32),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self {
            Field::Rational => Coeff::Rational(Box::new(BigRational::from_integer(n.clone()))),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let mut r = n % &pb;
                if r.is_negative() {
                    r += &pb;
                }
                Coeff::Modular(r.to_u32().expect("residue fits"))
            }
        }
    }

    /// `num / den` in the field; `den` must be nonzero in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Coeff> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::InvalidArgument("division by zero in coefficient".into()));
        }
        Ok(self.div(&self.from_bigint(num), &d))
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(p), Coeff::Modular(x), Coeff::Modular(y)) => {
                let s = *x as u64 + *y as u64;
                Coeff::Modular((s % *p as u64) as u32)
            }
            (Field::Rational, Coeff::Rational(x), Coeff::Rational(y)) => {
                Coeff::Rational(Box::new(x.as_ref() + y.as_ref()))
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Prime(p), Coeff::Modular(x)) => Coeff::Modular(if *x == 0 { 0 } else { p - x }),
            (Field::Rational, Coeff::Rational(x)) => Coeff::Rational(Box::new(-x.as_ref())),
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(p), Coeff::Modular(x), Coeff::Modular(y)) => {
                Coeff::Modular(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            (Field::Rational, Coeff::Rational(x), Coeff::Rational(y)) => {
                Coeff::Rational(Box::new(x.as_ref() * y.as_ref()))
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    /// Multiplicative inverse. Panics on zero, which is always a caller bug.
    pub fn inv(&self, a: &Coeff) -> Coeff {
        assert!(!a.is_zero(), "inverse of zero");
        match (self, a) {
            (Field::Prime(p), Coeff::Modular(x)) => Coeff::Modular(mod_pow(*x, p - 2, *p)),
            (Field::Rational, Coeff::Rational(x)) => Coeff::Rational(Box::new(x.recip())),
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &Coeff, e: u32) -> Coeff {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Interprets a coefficient as a (signed) integer when it is one.
    /// Modular residues are mapped to the symmetric range.
    pub fn to_i64(&self, a: &Coeff) -> Option<i64> {
        match (self, a) {
            (Field::Prime(p), Coeff::Modular(x)) => {
                let x = *x as i64;
                let p = *p as i64;
                Some(if x > p / 2 { x - p } else { x })
            }
            (Field::Rational, Coeff::Rational(x)) => {
                if x.is_integer() {
                    x.to_integer().to_i64()
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

fn mod_pow(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(x) => x.is_zero(),
            Coeff::Modular(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rational(x) => x.is_one(),
            Coeff::Modular(x) => *x == 1,
        }
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative_display(&self) -> bool {
        match self {
            Coeff::Rational(x) => x.is_negative(),
            Coeff::Modular(_) => false,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(x) => write!(f, "{x}"),
            Coeff::Modular(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F({p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_prime_field_products() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.mul(&f.from_i64(3), &f.from_i64(2)), f.from_i64(1));
        assert_eq!(f.from_i64(-1), Coeff::Modular(4));
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert!(Field::prime(32001).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(32003).is_ok());
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let a = q.from_fraction(&BigInt::from(6), &BigInt::from(-4)).unwrap();
        assert_eq!(a.to_string(), "-3/2");
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        prop_oneof![Just(Field::Rational), Just(Field::Prime(32003)), Just(Field::Prime(7))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn field_axioms(f in field_strategy(), a in -1000i64..1000, b in -1000i64..1000, c in 1i64..1000) {
            let (a, b, c) = (f.from_i64(a), f.from_i64(b), f.from_i64(c) );
            let c = if c.is_zero() { f.one() } else { c };
            prop_assert_eq!(f.mul(&f.add(&a, &b), &c), f.add(&f.mul(&a, &c), &f.mul(&b, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert!(f.mul(&c, &f.inv(&c)).is_one());
            prop_assert!(f.add(&a, &f.neg(&a)).is_zero());
        }
    }
}
