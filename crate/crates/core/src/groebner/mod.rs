//! Gröbner bases for ideals and submodules of free modules: normal forms,
//! membership, elimination and ring-map kernels.

mod engine;
mod modular;
pub(crate) mod kernels;

use std::sync::Arc;

use thiserror::Error;

use crate::polycore::{Coeff, CoefficientDomain, Monomial, PolyError, Polynomial, TermOrder, VariableContext};
use engine::{Engine, MVec};

pub use kernels::{graph_ideal, preimage_of_submodule, ring_map_kernel, solve_lift};

pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Bounds that make every Gröbner computation terminate predictably.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub degree_cap: u32,
    pub max_basis: usize,
    pub max_reductions: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { degree_cap: DEFAULT_DEGREE_CAP, max_basis: 5_000, max_reductions: 200_000 }
    }
}

impl Limits {
    pub fn with_degree_cap(degree_cap: u32) -> Self {
        Limits { degree_cap, ..Limits::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("Gröbner bases are only computed over fields, not over {0}")]
    UnsupportedDomain(CoefficientDomain),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("module ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn to_mvec(engine: &Engine, v: &[Polynomial]) -> MVec {
    let mut terms = Vec::new();
    for (pos, p) in v.iter().enumerate() {
        for (m, c) in p.terms() {
            terms.push((pos, m.clone(), c.clone()));
        }
    }
    engine.sort(terms)
}

fn from_mvec(v: &MVec, rank: usize, ctx: &Arc<VariableContext>, domain: CoefficientDomain) -> Vec<Polynomial> {
    let mut buckets: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); rank];
    for (pos, m, c) in &v.terms {
        buckets[*pos].push((m.clone(), c.clone()));
    }
    buckets.into_iter().map(|ts| Polynomial::from_terms(ctx, domain, ts)).collect()
}

fn check_ctx(ctx: &Arc<VariableContext>, domain: CoefficientDomain, p: &Polynomial) -> Result<(), GroebnerError> {
    if p.ctx() != ctx {
        return Err(PolyError::ContextMismatch.into());
    }
    if p.domain() != domain {
        return Err(PolyError::DomainMismatch(domain, p.domain()).into());
    }
    Ok(())
}

/// Reduced Gröbner basis of an ideal. Generators are monic and sorted by
/// ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ctx: Arc<VariableContext>,
    domain: CoefficientDomain,
    order: TermOrder,
    generators: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.iter().any(Polynomial::is_one)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().map(|g| g.leading_term(self.order).unwrap().0.clone()).collect()
    }

    fn engine(&self) -> Engine {
        Engine::exact(self.order, self.domain, Limits::default(), 1)
    }

    fn basis_mvecs(&self, e: &Engine) -> Vec<MVec> {
        self.generators.iter().map(|g| to_mvec(e, std::slice::from_ref(g))).collect()
    }

    /// Remainder of complete multivariate division; zero iff `p` is in the ideal.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial, GroebnerError> {
        check_ctx(&self.ctx, self.domain, p)?;
        let e = self.engine();
        let r = e.normal_form(&to_mvec(&e, std::slice::from_ref(p)), &self.basis_mvecs(&e));
        Ok(from_mvec(&r, 1, &self.ctx, self.domain).pop().unwrap())
    }

    /// Division by a stored basis: no Buchberger run, usable for replay.
    pub fn from_stored(
        ctx: &Arc<VariableContext>,
        domain: CoefficientDomain,
        order: TermOrder,
        generators: Vec<Polynomial>,
    ) -> Self {
        let e = Engine::exact(order, domain, Limits::default(), 1);
        let generators = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| from_mvec(&e.make_monic(to_mvec(&e, std::slice::from_ref(g))), 1, ctx, domain).pop().unwrap())
            .collect();
        GroebnerBasis { ctx: ctx.clone(), domain, order, generators, reduced: false }
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(p)?.is_zero())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
pub fn buchberger(
    ctx: &Arc<VariableContext>,
    domain: CoefficientDomain,
    gens: &[Polynomial],
    order: TermOrder,
    limits: &Limits,
) -> Result<GroebnerBasis, GroebnerError> {
    for g in gens {
        check_ctx(ctx, domain, g)?;
    }
    let e = Engine::exact(order, domain, *limits, 1);
    let input = gens.iter().map(|g| to_mvec(&e, std::slice::from_ref(g))).collect();
    let basis = modular::groebner_basis(&e, input)?;
    let generators = basis.iter().map(|b| from_mvec(b, 1, ctx, domain).pop().unwrap()).collect();
    Ok(GroebnerBasis { ctx: ctx.clone(), domain, order, generators, reduced: true })
}

pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial, GroebnerError> {
    gb.normal_form(p)
}

/// Generators of `(gens) ∩ k[x_eliminate.., ..]`, i.e. the elimination ideal
/// after removing the leading `eliminate` variables of the context.
pub fn elimination_ideal(
    ctx: &Arc<VariableContext>,
    domain: CoefficientDomain,
    gens: &[Polynomial],
    eliminate: usize,
    limits: &Limits,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let order = if eliminate == 0 { TermOrder::GrevLex } else { TermOrder::BlockElimination(eliminate) };
    let gb = buchberger(ctx, domain, gens, order, limits)?;
    Ok(gb
        .generators
        .into_iter()
        .filter(|g| (0..eliminate).all(|i| !g.uses_var(i)))
        .collect())
}

/// Reduced Gröbner basis of a submodule of `k[x]^rank`, position-over-term
/// with lower positions larger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleGroebnerBasis {
    ctx: Arc<VariableContext>,
    domain: CoefficientDomain,
    order: TermOrder,
    rank: usize,
    generators: Vec<Vec<Polynomial>>,
}

impl ModuleGroebnerBasis {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn generators(&self) -> &[Vec<Polynomial>] {
        &self.generators
    }

    /// Leading terms as (position, monomial).
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        let e = self.engine();
        self.generators
            .iter()
            .map(|g| {
                let (p, m, _) = to_mvec(&e, g).lead().cloned().unwrap();
                (p, m)
            })
            .collect()
    }

    fn engine(&self) -> Engine {
        Engine::exact(self.order, self.domain, Limits::default(), self.rank)
    }

    pub fn normal_form(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>, GroebnerError> {
        if v.len() != self.rank {
            return Err(GroebnerError::RankMismatch(v.len(), self.rank));
        }
        for p in v {
            check_ctx(&self.ctx, self.domain, p)?;
        }
        let e = self.engine();
        let basis: Vec<MVec> = self.generators.iter().map(|g| to_mvec(&e, g)).collect();
        let r = e.normal_form(&to_mvec(&e, v), &basis);
        Ok(from_mvec(&r, self.rank, &self.ctx, self.domain))
    }

    pub fn contains(&self, v: &[Polynomial]) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(v)?.iter().all(Polynomial::is_zero))
    }
}

pub fn module_buchberger(
    ctx: &Arc<VariableContext>,
    domain: CoefficientDomain,
    rank: usize,
    gens: &[Vec<Polynomial>],
    order: TermOrder,
    limits: &Limits,
) -> Result<ModuleGroebnerBasis, GroebnerError> {
    for g in gens {
        if g.len() != rank {
            return Err(GroebnerError::RankMismatch(g.len(), rank));
        }
        for p in g {
            check_ctx(ctx, domain, p)?;
        }
    }
    let e = Engine::exact(order, domain, *limits, rank);
    let input = gens.iter().map(|g| to_mvec(&e, g)).collect();
    let basis = modular::groebner_basis(&e, input)?;
    let generators = basis.iter().map(|b| from_mvec(b, rank, ctx, domain)).collect();
    Ok(ModuleGroebnerBasis { ctx: ctx.clone(), domain, order, rank, generators })
}

pub fn module_normal_form(v: &[Polynomial], mgb: &ModuleGroebnerBasis) -> Result<Vec<Polynomial>, GroebnerError> {
    mgb.normal_form(v)
}

#[cfg(test)]
mod tests;
