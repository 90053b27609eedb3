//! Independent cross-checks: randomized identity testing modulo a large prime
//! and replay of stored classification evidence by substitution and division.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{ClassificationReport, Evidence, ModuleReplay, RingReplay};
use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::polycore::{is_prime_u64, residue_mod, CoefficientDomain, PolyError, Polynomial, TermOrder};

pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Fallback moduli tried when a coefficient denominator vanishes modulo the configured prime.
const FALLBACK_PRIMES: [u64; 2] = [1_000_000_007, 998_244_353];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    prime: u64,
    samples: usize,
    seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { prime: MERSENNE_61, samples: 32, seed: 0 }
    }
}

impl OracleConfig {
    pub fn new(prime: u64, samples: usize, seed: u64) -> Result<Self> {
        if !is_prime_u64(prime) {
            return Err(PolyError::NotPrime(prime).into());
        }
        if samples == 0 {
            return Err(Error::ShapeMismatch("oracle needs at least one sample".into()));
        }
        Ok(OracleConfig { prime, samples, seed })
    }

    pub fn with_seed(seed: u64) -> Self {
        OracleConfig { seed, ..Self::default() }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    ProbablyEqual,
    DefinitelyUnequal,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u32, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Residues of the terms of `p`, `None` if some denominator vanishes mod `prime`.
fn embed(p: &Polynomial, prime: u64) -> Option<Vec<(Vec<u32>, u64)>> {
    p.terms().map(|(m, c)| residue_mod(c, prime).map(|r| (m.exponents().to_vec(), r))).collect()
}

fn eval_embedded(terms: &[(Vec<u32>, u64)], point: &[u64], prime: u64) -> u64 {
    terms.iter().fold(0, |acc, (exps, c)| {
        let t = exps.iter().zip(point).fold(*c, |t, (&e, &x)| mul_mod(t, pow_mod(x, e, prime), prime));
        ((acc as u128 + t as u128) % prime as u128) as u64
    })
}

/// Evaluates `p` and `q` at `cfg.samples` random points; deterministic in the seed.
/// Over `F_p` the domain's own prime is used.
pub fn identity_check(p: &Polynomial, q: &Polynomial, cfg: &OracleConfig) -> Result<OracleVerdict> {
    if p.ctx() != q.ctx() {
        return Err(PolyError::ContextMismatch.into());
    }
    if p.domain() != q.domain() {
        return Err(PolyError::DomainMismatch(p.domain(), q.domain()).into());
    }
    let candidates: Vec<u64> = match p.domain() {
        CoefficientDomain::PrimeField(ch) => vec![ch],
        _ => std::iter::once(cfg.prime).chain(FALLBACK_PRIMES).collect(),
    };
    let (prime, ep, eq) = candidates
        .iter()
        .find_map(|&pr| Some((pr, embed(p, pr)?, embed(q, pr)?)))
        .ok_or_else(|| Error::EmbeddingFailure(format!("coefficients of {p} or {q} have denominators divisible by every oracle prime")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = p.nvars();
    for _ in 0..cfg.samples {
        let point: Vec<u64> = (0..n).map(|_| rng.gen_range(0..prime)).collect();
        if eval_embedded(&ep, &point, prime) != eval_embedded(&eq, &point, prime) {
            return Ok(OracleVerdict::DefinitelyUnequal);
        }
    }
    Ok(OracleVerdict::ProbablyEqual)
}

/// Outcome of replaying a report's evidence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplayVerdict {
    /// Witnesses re-verified.
    pub verified: Vec<String>,
    /// Evidence kinds with nothing to replay.
    pub skipped: Vec<String>,
}

fn mismatch(pred: &str, what: impl std::fmt::Display) -> Error {
    Error::EvidenceMismatch(format!("{pred}: {what}"))
}

struct RingCheck<'a> {
    data: &'a RingReplay,
    source: GroebnerBasis,
    target: GroebnerBasis,
}

impl<'a> RingCheck<'a> {
    fn new(data: &'a RingReplay) -> Self {
        let source = GroebnerBasis::from_stored(&data.source_ctx, data.domain, TermOrder::GrevLex, data.source_gb.clone());
        let target = GroebnerBasis::from_stored(&data.target_ctx, data.domain, TermOrder::GrevLex, data.target_gb.clone());
        RingCheck { data, source, target }
    }

    fn image(&self, a: &Polynomial) -> Result<Polynomial> {
        Ok(a.substitute_into(&self.data.images, &self.data.target_ctx, self.data.domain)?)
    }

    fn zero_in_target(&self, b: &Polynomial) -> Result<bool> {
        Ok(self.target.contains(b)?)
    }

    fn zero_in_source(&self, a: &Polynomial) -> Result<bool> {
        Ok(self.source.contains(a)?)
    }
}

fn sum_products(coeffs: &[Polynomial], vectors: &[Vec<Polynomial>], rank: usize) -> Result<Vec<Polynomial>> {
    let mut acc: Option<Vec<Polynomial>> = None;
    for (c, v) in coeffs.iter().zip(vectors) {
        if v.len() != rank {
            return Err(Error::ShapeMismatch(format!("vector of length {} where {rank} expected", v.len())));
        }
        let term: Vec<Polynomial> = v.iter().map(|x| c.try_mul(x)).collect::<std::result::Result<_, _>>()?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.iter().zip(&term).map(|(x, y)| x.try_add(y)).collect::<std::result::Result<_, _>>()?,
        });
    }
    Ok(acc.unwrap_or_default())
}

fn replay_module_kernel(pred: &str, element: &[Polynomial], data: &ModuleReplay) -> Result<()> {
    if data.source_gb.contains(element)? {
        return Err(mismatch(pred, "kernel element is zero in the source module"));
    }
    let image = sum_products(element, &data.columns, data.target_gb.rank())?;
    if !image.is_empty() && !data.target_gb.contains(&image)? {
        return Err(mismatch(pred, "kernel element does not map to zero"));
    }
    Ok(())
}

fn replay_retraction(pred: &str, images: &[Vec<Polynomial>], data: &ModuleReplay) -> Result<()> {
    let s = data.source_gb.rank();
    if images.len() != data.target_gb.rank() {
        return Err(mismatch(pred, format!("{} retraction images for {} target generators", images.len(), data.target_gb.rank())));
    }
    let ctx = data.source_gb.ctx();
    let domain = data.source_gb.domain();
    for (j, rel) in data.target_relations.iter().enumerate() {
        let v = sum_products(rel, images, s)?;
        if !v.is_empty() && !data.source_gb.contains(&v)? {
            return Err(mismatch(pred, format!("retraction does not respect target relation {j}")));
        }
    }
    for (i, col) in data.columns.iter().enumerate() {
        let mut v = sum_products(col, images, s)?;
        if v.is_empty() {
            v = vec![Polynomial::zero(ctx, domain); s];
        }
        v[i] = v[i].try_sub(&Polynomial::one(ctx, domain))?;
        if !data.source_gb.contains(&v)? {
            return Err(mismatch(pred, format!("r∘v differs from the identity on generator {i}")));
        }
    }
    Ok(())
}

/// Re-verifies every replayable witness in `report` without Buchberger runs.
pub fn replay_evidence(report: &ClassificationReport) -> Result<ReplayVerdict> {
    let mut out = ReplayVerdict::default();
    for (pred, status) in &report.predicates {
        let Some(ev) = &status.evidence else { continue };
        let label = format!("{pred}: {}", ev.kind());
        match ev {
            Evidence::KernelElements { generators, replay: Some(data) } => {
                let rc = RingCheck::new(data);
                for g in generators {
                    if rc.zero_in_source(g)? {
                        return Err(mismatch(pred, format!("kernel generator {g} is zero in the source")));
                    }
                    if !rc.zero_in_target(&rc.image(g)?)? {
                        return Err(mismatch(pred, format!("kernel generator {g} does not map to zero")));
                    }
                }
            }
            Evidence::Preimages { preimages, replay: Some(data) } => {
                let rc = RingCheck::new(data);
                for (var, a) in preimages {
                    let idx = data.target_ctx.index_of(var).ok_or_else(|| mismatch(pred, format!("unknown variable {var}")))?;
                    let diff = rc.image(a)?.try_sub(&Polynomial::var(&data.target_ctx, data.domain, idx))?;
                    if !rc.zero_in_target(&diff)? {
                        return Err(mismatch(pred, format!("f({a}) ≠ {var}")));
                    }
                }
            }
            Evidence::SectionWitness { witness, kernel, replay: Some(data) } => {
                let rc = RingCheck::new(data);
                if !rc.zero_in_target(&rc.image(witness)?.try_sub(&Polynomial::one(&data.target_ctx, data.domain))?)? {
                    return Err(mismatch(pred, format!("f({witness}) ≠ 1")));
                }
                for k in kernel {
                    if !rc.zero_in_target(&rc.image(k)?)? {
                        return Err(mismatch(pred, format!("{k} is not in the kernel")));
                    }
                    if !rc.zero_in_source(&witness.try_mul(k)?)? {
                        return Err(mismatch(pred, format!("witness does not annihilate {k}")));
                    }
                }
            }
            Evidence::ModuleKernelElement { element, replay: Some(data) } => replay_module_kernel(pred, element, data)?,
            Evidence::Retraction { images, replay: Some(data) } => replay_retraction(pred, images, data)?,
            Evidence::RightInverse { matrix, original: Some(m) } => {
                if !m.mul(&matrix.0)?.is_identity() {
                    return Err(mismatch(pred, "M·X is not the identity"));
                }
            }
            _ => {
                out.skipped.push(label);
                continue;
            }
        }
        out.verified.push(label);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
