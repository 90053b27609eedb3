use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::{module_buchberger, Limits, ModuleGroebnerBasis};
use crate::polycore::{Coeff, CoefficientDomain, Monomial, Polynomial, TermOrder, VariableContext};
use crate::presentations::AlgebraPresentation;

use super::ExactMatrix;

/// A `k`-basis (standard monomials per position) of `k[x]^r / L`.
#[derive(Clone, Debug)]
pub struct FdModuleBasis {
    ctx: Arc<VariableContext>,
    domain: CoefficientDomain,
    rank: usize,
    gb: ModuleGroebnerBasis,
    basis: Vec<(usize, Monomial)>,
}

/// Staircase of a monomial ideal given by its generators, or `None` if infinite.
fn staircase(nvars: usize, leads: &[Monomial]) -> Option<Vec<Monomial>> {
    if leads.iter().any(Monomial::is_one) {
        return Some(vec![]);
    }
    for i in 0..nvars {
        if !leads.iter().any(|m| m.pure_power().map(|(j, _)| j) == Some(i)) {
            return None;
        }
    }
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut stack = vec![Monomial::one(nvars)];
    while let Some(m) = stack.pop() {
        if leads.iter().any(|l| l.divides(&m)) || !seen.insert(m.clone()) {
            continue;
        }
        for i in 0..nvars {
            stack.push(m.mul(&Monomial::var(nvars, i, 1)));
        }
    }
    Some(seen.into_iter().collect())
}

impl FdModuleBasis {
    /// `None` when the quotient is infinite-dimensional over `k`.
    pub fn new(
        ctx: &Arc<VariableContext>,
        domain: CoefficientDomain,
        rank: usize,
        ideal: &[Polynomial],
        relations: &[Vec<Polynomial>],
        limits: &Limits,
    ) -> Result<Option<Self>> {
        let mut gens: Vec<Vec<Polynomial>> = relations.to_vec();
        for g in ideal {
            for j in 0..rank {
                let mut v = vec![Polynomial::zero(ctx, domain); rank];
                v[j] = g.clone();
                gens.push(v);
            }
        }
        let gb = module_buchberger(ctx, domain, rank, &gens, TermOrder::GrevLex, limits)?;
        let leads = gb.leading_terms();
        let mut basis = Vec::new();
        for pos in 0..rank {
            let at: Vec<Monomial> = leads.iter().filter(|(p, _)| *p == pos).map(|(_, m)| m.clone()).collect();
            match staircase(ctx.len(), &at) {
                Some(ms) => basis.extend(ms.into_iter().map(|m| (pos, m))),
                None => return Ok(None),
            }
        }
        Ok(Some(FdModuleBasis { ctx: ctx.clone(), domain, rank, gb, basis }))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &[(usize, Monomial)] {
        &self.basis
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn reduce(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        Ok(self.gb.normal_form(v)?)
    }

    pub fn coordinates(&self, v: &[Polynomial]) -> Result<Vec<Coeff>> {
        let nf = self.reduce(v)?;
        Ok(self.basis.iter().map(|(p, m)| nf[*p].coefficient(m)).collect())
    }

    pub fn basis_element(&self, k: usize) -> Vec<Polynomial> {
        let (pos, m) = &self.basis[k];
        let mut v = vec![Polynomial::zero(&self.ctx, self.domain); self.rank];
        v[*pos] = Polynomial::from_terms(&self.ctx, self.domain, [(m.clone(), Coeff::from_integer(1.into()))]);
        v
    }

    pub fn element(&self, coords: &[Coeff]) -> Vec<Polynomial> {
        let mut v = vec![Polynomial::zero(&self.ctx, self.domain); self.rank];
        for ((pos, m), c) in self.basis.iter().zip(coords) {
            if !c.is_zero() {
                v[*pos] = &v[*pos] + &Polynomial::from_terms(&self.ctx, self.domain, [(m.clone(), c.clone())]);
            }
        }
        v
    }

    /// Matrix of multiplication by `p` in the standard basis.
    pub fn action(&self, p: &Polynomial) -> Result<ExactMatrix> {
        let cols: Vec<Vec<Coeff>> = (0..self.dim())
            .map(|k| {
                let v: Vec<Polynomial> = self.basis_element(k).iter().map(|c| c * p).collect();
                self.coordinates(&v)
            })
            .collect::<Result<_>>()?;
        let rows = (0..self.dim()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        ExactMatrix::from_rows(self.domain, self.dim(), rows)
    }
}

/// `k`-basis of a finite-dimensional algebra.
#[derive(Clone, Debug)]
pub struct FdBasis {
    inner: FdModuleBasis,
}

impl FdBasis {
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.inner.basis.iter().map(|(_, m)| m.clone()).collect()
    }

    pub fn element(&self, m: &Monomial) -> Polynomial {
        Polynomial::from_terms(&self.inner.ctx, self.inner.domain, [(m.clone(), Coeff::from_integer(1.into()))])
    }

    pub fn coordinates(&self, p: &Polynomial, _limits: &Limits) -> Result<Vec<Coeff>> {
        self.inner.coordinates(std::slice::from_ref(p))
    }

    pub fn element_from_coordinates(&self, coords: &[Coeff]) -> Polynomial {
        self.inner.element(coords).pop().expect("rank one")
    }

    pub fn as_module(&self) -> &FdModuleBasis {
        &self.inner
    }
}

/// Staircase basis of `A`, or `None` if `A` is infinite-dimensional over `k`.
pub fn fd_basis(a: &AlgebraPresentation, limits: &Limits) -> Result<Option<FdBasis>> {
    Ok(FdModuleBasis::new(a.ctx(), a.domain(), 1, a.ideal(), &[], limits)?.map(|inner| FdBasis { inner }))
}

/// Like [`fd_basis`] but failing with `NotFiniteDimensional`.
pub fn require_fd_basis(a: &AlgebraPresentation, limits: &Limits) -> Result<FdBasis> {
    fd_basis(a, limits)?.ok_or_else(|| Error::NotFiniteDimensional(format!("`{}` has an infinite staircase", a.name())))
}

/// How linear-algebra questions over an algebra are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Exact linear algebra over `k` on staircase bases.
    FiniteDimensional,
    /// Module Gröbner bases over the algebra itself.
    General,
}

/// A `B`-linear `r: N → M` with `r ∘ v = id_M`, found in the finite-dimensional
/// regime. `N` is `B^t / (n_relations)`, `v` sends generator `i` of `M` to
/// `v_columns[i] ∈ B^t`; the result gives `r(e'_j) ∈ B^rank(M)` for each `j < t`.
pub fn retraction_solve(
    m: &FdModuleBasis,
    t: usize,
    n_relations: &[Vec<Polynomial>],
    v_columns: &[Vec<Polynomial>],
) -> Result<Option<Vec<Vec<Polynomial>>>> {
    let d = m.dim();
    let nunk = t * d;
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    let mut rhs: Vec<Coeff> = Vec::new();
    let mut constrain = |coeffs: &[Polynomial], target: Vec<Coeff>| -> Result<()> {
        if coeffs.len() != t {
            return Err(Error::ShapeMismatch(format!("vector of length {} in a module with {t} generators", coeffs.len())));
        }
        let mut block = vec![vec![Coeff::zero(); nunk]; d];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let act = m.action(c)?;
            for i in 0..d {
                for k in 0..d {
                    block[i][j * d + k] = act.get(i, k).clone();
                }
            }
        }
        rows.extend(block);
        rhs.extend(target);
        Ok(())
    };
    for rho in n_relations {
        constrain(rho, vec![Coeff::zero(); d])?;
    }
    for (i, col) in v_columns.iter().enumerate() {
        let mut e = vec![Polynomial::zero(m.ctx(), m.domain()); m.rank()];
        e[i] = Polynomial::one(m.ctx(), m.domain());
        constrain(col, m.coordinates(&e)?)?;
    }
    let mat = ExactMatrix::from_rows(m.domain(), nunk, rows)?;
    Ok(mat.solve(&rhs)?.map(|x| (0..t).map(|j| m.element(&x[j * d..(j + 1) * d])).collect()))
}
