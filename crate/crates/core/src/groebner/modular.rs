//! Gröbner bases over ℚ through images modulo word-size primes, Chinese
//! remaindering and rational reconstruction, followed by an exact check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::engine::{Engine, Fp, MVec};
use super::GroebnerError;
use crate::polycore::{is_prime_u64, mod_inverse, residue_mod, Coeff, CoefficientDomain, Monomial};

const MAX_PRIMES: usize = 48;

type Key = Vec<(usize, Monomial)>;
type Residues = Vec<BTreeMap<(usize, Monomial), BigInt>>;

/// Reduced Gröbner basis; over ℚ the multi-modular route is taken first.
pub(super) fn groebner_basis(e: &Engine, gens: Vec<MVec>) -> Result<Vec<MVec>, GroebnerError> {
    match e.domain() {
        CoefficientDomain::Rationals => {}
        CoefficientDomain::PrimeField(p) if p < 1 << 62 => {
            let fe = Engine { order: e.order, field: Fp(p), limits: e.limits, rank: e.rank };
            let image: Vec<MVec<u64>> = gens.iter().map(|g| reduce(&fe, g, p).expect("residues")).collect();
            return Ok(fe.buchberger(image)?.iter().map(|g| lift(e, g)).collect());
        }
        _ => return e.buchberger(gens),
    }
    let gens: Vec<MVec> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let ints: Vec<MVec> = gens.iter().map(primitive_integer).collect();
    let mut groups: Vec<Group> = Vec::new();
    for p in primes().take(MAX_PRIMES) {
        // primes dividing a leading coefficient change the leading ideal
        if ints.iter().any(|g| residue_mod(&g.lead().unwrap().2, p) == Some(0)) {
            continue;
        }
        let fe = Engine { order: e.order, field: Fp(p), limits: e.limits, rank: e.rank };
        let image: Vec<MVec<u64>> = ints.iter().map(|g| reduce(&fe, g, p).expect("integer coefficients")).collect();
        let gp = fe.buchberger(image)?;
        let key: Key = gp.iter().map(|g| {
            let (pos, m, _) = g.lead().unwrap();
            (*pos, m.clone())
        }).collect();
        let idx = match groups.iter().position(|g| g.key == key) {
            Some(i) => i,
            None => {
                groups.push(Group::new(key));
                groups.len() - 1
            }
        };
        let group = &mut groups[idx];
        if let Some(candidate) = group.candidate.take() {
            let agrees = candidate.iter().zip(&gp).all(|(c, g)| reduce(&fe, c, p).as_ref() == Some(g));
            if agrees && verify(e, &candidate, &gens)? {
                return Ok(candidate);
            }
        }
        group.absorb(&gp, p);
        group.candidate = group.reconstruct(e);
    }
    e.buchberger(gens)
}

struct Group {
    key: Key,
    modulus: BigInt,
    residues: Residues,
    candidate: Option<Vec<MVec>>,
}

impl Group {
    fn new(key: Key) -> Self {
        let residues = vec![BTreeMap::new(); key.len()];
        Group { key, modulus: BigInt::one(), residues, candidate: None }
    }

    fn absorb(&mut self, gp: &[MVec<u64>], p: u64) {
        let pb = BigInt::from(p);
        let m_inv = mod_inverse(&self.modulus, &pb).expect("distinct primes");
        for (res, g) in self.residues.iter_mut().zip(gp) {
            let mut new: BTreeMap<(usize, Monomial), BigInt> = g
                .terms
                .iter()
                .map(|(pos, m, c)| ((*pos, m.clone()), BigInt::from(*c)))
                .collect();
            for k in res.keys() {
                new.entry(k.clone()).or_insert_with(BigInt::zero);
            }
            for (k, b) in new {
                let a = res.get(&k).cloned().unwrap_or_else(BigInt::zero);
                let t = ((&b - &a) * &m_inv).mod_floor(&pb);
                res.insert(k, a + &self.modulus * t);
            }
        }
        self.modulus *= pb;
    }

    fn reconstruct(&self, e: &Engine) -> Option<Vec<MVec>> {
        let bound = (&self.modulus / 2u32).sqrt();
        let mut out = Vec::with_capacity(self.residues.len());
        for res in &self.residues {
            let mut terms = Vec::with_capacity(res.len());
            for ((pos, m), a) in res {
                terms.push((*pos, m.clone(), rational_reconstruction(a, &self.modulus, &bound)?));
            }
            out.push(e.sort(terms));
        }
        Some(out)
    }
}

/// `r/s ≡ a (mod m)` with `|r|, s ≤ bound`, if it exists.
fn rational_reconstruction(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Coeff> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > *bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Coeff::new(r1, s1))
}

/// Exact check: every input reduces to zero and the candidate is a Gröbner basis.
fn verify(e: &Engine, candidate: &[MVec], gens: &[MVec]) -> Result<bool, GroebnerError> {
    if gens.iter().any(|g| !e.normal_form(g, candidate).is_zero()) {
        return Ok(false);
    }
    e.is_groebner(candidate)
}

fn primitive_integer(g: &MVec) -> MVec {
    let l = g.terms.iter().fold(BigInt::one(), |acc, t| acc.lcm(t.2.denom()));
    MVec { terms: g.terms.iter().map(|(p, m, c)| (*p, m.clone(), c * Coeff::from_integer(l.clone()))).collect() }
}

fn reduce(fe: &Engine<Fp>, g: &MVec, p: u64) -> Option<MVec<u64>> {
    let mut terms = Vec::with_capacity(g.terms.len());
    for (pos, m, c) in &g.terms {
        terms.push((*pos, m.clone(), residue_mod(c, p)?));
    }
    Some(fe.sort(terms))
}

fn lift(e: &Engine, g: &MVec<u64>) -> MVec {
    e.sort(g.terms.iter().map(|(pos, m, c)| (*pos, m.clone(), Coeff::from_integer(BigInt::from(*c)))).collect())
}

/// Primes below 2^62 in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        let bound = (&m / 2u32).sqrt();
        for (r, s) in [(3i64, 7i64), (-5, 12), (0, 1), (123_456, 789)] {
            let inv = mod_inverse(&BigInt::from(s), &m).unwrap();
            let a = (BigInt::from(r) * inv).mod_floor(&m);
            assert_eq!(rational_reconstruction(&a, &m, &bound), Some(Coeff::new(r.into(), s.into())));
        }
    }

    #[test]
    fn primes_are_decreasing_primes() {
        let ps: Vec<u64> = primes().take(4).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| is_prime_u64(p) && p < 1 << 62));
    }
}
