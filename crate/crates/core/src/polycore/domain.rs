use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::PolyError;

/// Exact coefficient. Over `F_p` the value is the least non-negative residue,
/// over the integers and naturals it has denominator one.
pub type Coeff = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CoefficientDomain {
    Rationals,
    PrimeField(u64),
    Integers,
    Naturals,
}

impl CoefficientDomain {
    /// `F_p`, rejecting composite or tiny moduli.
    pub fn prime_field(p: u64) -> Result<Self, PolyError> {
        if is_prime_u64(p) {
            Ok(CoefficientDomain::PrimeField(p))
        } else {
            Err(PolyError::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientDomain::Rationals | CoefficientDomain::PrimeField(_))
    }

    pub fn has_negation(&self) -> bool {
        !matches!(self, CoefficientDomain::Naturals)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientDomain::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Brings an arbitrary rational into canonical form for this domain.
    ///
    /// Panics when the value does not belong to the domain (a fraction over the
    /// integers, a negative number over the naturals, a denominator divisible by p).
    pub fn normalize(&self, c: Coeff) -> Coeff {
        self.try_normalize(c).expect("coefficient outside its domain")
    }

    pub fn try_normalize(&self, c: Coeff) -> Result<Coeff, PolyError> {
        match self {
            CoefficientDomain::Rationals => Ok(c),
            CoefficientDomain::PrimeField(p) => {
                let p = BigInt::from(*p);
                let num = c.numer().mod_floor(&p);
                let den = c.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(PolyError::NotInDomain(c.to_string(), self.name()));
                }
                let inv = mod_inverse(&den, &p).expect("prime modulus");
                Ok(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
            CoefficientDomain::Integers => {
                if c.is_integer() {
                    Ok(c)
                } else {
                    Err(PolyError::NotInDomain(c.to_string(), self.name()))
                }
            }
            CoefficientDomain::Naturals => {
                if c.is_integer() && !c.is_negative() {
                    Ok(c)
                } else {
                    Err(PolyError::NotInDomain(c.to_string(), self.name()))
                }
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.normalize(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            CoefficientDomain::PrimeField(_) => self.normalize(a + b),
            _ => a + b,
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            CoefficientDomain::PrimeField(_) => self.normalize(a * b),
            _ => a * b,
        }
    }

    /// Additive inverse; `None` over the naturals (except for zero).
    pub fn neg(&self, a: &Coeff) -> Option<Coeff> {
        match self {
            CoefficientDomain::Naturals if !a.is_zero() => None,
            CoefficientDomain::PrimeField(_) => Some(self.normalize(-a)),
            _ => Some(-a),
        }
    }

    /// Multiplicative inverse in a field; `None` for zero or non-units outside fields.
    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if a.is_zero() {
            return None;
        }
        match self {
            CoefficientDomain::Rationals => Some(a.recip()),
            CoefficientDomain::PrimeField(p) => {
                let p = BigInt::from(*p);
                mod_inverse(a.numer(), &p).map(BigRational::from_integer)
            }
            CoefficientDomain::Integers => {
                if a.is_one() || (-a).is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            CoefficientDomain::Naturals => a.is_one().then(|| a.clone()),
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::Rationals => write!(f, "Q"),
            CoefficientDomain::PrimeField(p) => write!(f, "Fp {p}"),
            CoefficientDomain::Integers => write!(f, "Z"),
            CoefficientDomain::Naturals => write!(f, "N"),
        }
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residue of an exact coefficient modulo `p`, or `None` when the denominator vanishes.
pub fn residue_mod(c: &Coeff, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = c.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = c.numer().mod_floor(&pb);
    let inv = mod_inverse(&den, &pb)?;
    (num * inv).mod_floor(&pb).to_u64()
}
