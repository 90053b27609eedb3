//! Kähler differentials, the cotangent map `v_f` and the relative cotangent
//! sequence, decided either on staircase bases or with module Gröbner bases.

use std::sync::Arc;


use crate::classify::{Evidence, ModuleReplay, PredicateStatus};
use crate::error::{Error, Result};
use crate::groebner::{module_buchberger, preimage_of_submodule, solve_lift, Limits, ModuleGroebnerBasis};
use crate::modlin::{retraction_solve, ExactMatrix, FdModuleBasis, Regime};
use crate::polycore::{Coeff, Polynomial, TermOrder};
use crate::presentations::{pushout, relative_presentation, AlgebraMorphism, AlgebraPresentation};

/// `B^rank / relations` over a presented algebra `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulePresentation {
    algebra: Arc<AlgebraPresentation>,
    labels: Vec<String>,
    relations: Vec<Vec<Polynomial>>,
}

impl ModulePresentation {
    /// Entries are reduced modulo the algebra ideal; zero relations are dropped.
    pub fn new(
        algebra: Arc<AlgebraPresentation>,
        labels: Vec<String>,
        relations: Vec<Vec<Polynomial>>,
        limits: &Limits,
    ) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::ShapeMismatch(format!("duplicate generator label {l}")));
            }
        }
        let mut rels: Vec<Vec<Polynomial>> = Vec::new();
        for r in relations {
            if r.len() != labels.len() {
                return Err(Error::ShapeMismatch(format!("relation of length {} for rank {}", r.len(), labels.len())));
            }
            let r = r.iter().map(|p| algebra.reduce(p, limits)).collect::<Result<Vec<_>>>()?;
            if r.iter().any(|p| !p.is_zero()) && !rels.contains(&r) {
                rels.push(r);
            }
        }
        Ok(ModulePresentation { algebra, labels, relations: rels })
    }

    pub fn free(algebra: Arc<AlgebraPresentation>, labels: Vec<String>) -> Self {
        ModulePresentation { algebra, labels, relations: vec![] }
    }

    pub fn algebra(&self) -> &Arc<AlgebraPresentation> {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relations(&self) -> &[Vec<Polynomial>] {
        &self.relations
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn generator(&self, j: usize) -> Vec<Polynomial> {
        let mut v = vec![self.algebra.zero(); self.rank()];
        v[j] = self.algebra.one();
        v
    }

    /// Generators of `L + I·B^rank` in the free module over the flattened ring.
    pub fn submodule_generators(&self) -> Vec<Vec<Polynomial>> {
        let mut gens = self.relations.clone();
        for g in self.algebra.ideal() {
            for j in 0..self.rank() {
                let mut v = vec![self.algebra.zero(); self.rank()];
                v[j] = g.clone();
                gens.push(v);
            }
        }
        gens
    }

    pub fn gb(&self, limits: &Limits) -> Result<ModuleGroebnerBasis> {
        let a = &self.algebra;
        Ok(module_buchberger(a.ctx(), a.domain(), self.rank(), &self.submodule_generators(), TermOrder::GrevLex, limits)?)
    }

    pub fn reduce(&self, v: &[Polynomial], limits: &Limits) -> Result<Vec<Polynomial>> {
        Ok(self.gb(limits)?.normal_form(v)?)
    }

    /// Every generator reduces to zero.
    pub fn is_zero(&self, limits: &Limits) -> Result<bool> {
        let gb = self.gb(limits)?;
        for j in 0..self.rank() {
            if !gb.contains(&self.generator(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn fd_basis(&self, limits: &Limits) -> Result<Option<FdModuleBasis>> {
        let a = &self.algebra;
        FdModuleBasis::new(a.ctx(), a.domain(), self.rank(), a.ideal(), &self.relations, limits)
    }

    /// `k`-dimension, or `None` when infinite.
    pub fn dimension(&self, limits: &Limits) -> Result<Option<usize>> {
        Ok(self.fd_basis(limits)?.map(|b| b.dim()))
    }

    /// Same generators and relations transported along `g: B → C`.
    pub fn base_change(&self, g: &AlgebraMorphism, limits: &Limits) -> Result<ModulePresentation> {
        if g.source() != &self.algebra && g.source().ctx() != self.algebra.ctx() {
            return Err(Error::AlgebraMismatch("base change along a map out of another algebra".into()));
        }
        let rels = self
            .relations
            .iter()
            .map(|r| r.iter().map(|p| g.apply_raw(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ModulePresentation::new(g.target().clone(), self.labels.clone(), rels, limits)
    }
}

/// `B`-linear map given by a `target.rank × source.rank` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    source: ModulePresentation,
    target: ModulePresentation,
    /// `columns[i] = v(e_i)`.
    columns: Vec<Vec<Polynomial>>,
}

impl ModuleMap {
    pub fn new(source: ModulePresentation, target: ModulePresentation, columns: Vec<Vec<Polynomial>>, limits: &Limits) -> Result<Self> {
        if source.algebra.ctx() != target.algebra.ctx() || source.algebra.ideal() != target.algebra.ideal() {
            return Err(Error::AlgebraMismatch("module map between modules over different algebras".into()));
        }
        if columns.len() != source.rank() || columns.iter().any(|c| c.len() != target.rank()) {
            return Err(Error::ShapeMismatch(format!(
                "matrix does not have shape {}x{}",
                target.rank(),
                source.rank()
            )));
        }
        let columns = columns
            .iter()
            .map(|c| c.iter().map(|p| target.algebra.reduce(p, limits)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = ModuleMap { source, target, columns };
        let tgb = m.target.gb(limits)?;
        for r in m.source.relations() {
            if !tgb.contains(&m.apply(r)?)? {
                return Err(Error::ShapeMismatch("a source relation does not map into the target relations".into()));
            }
        }
        Ok(m)
    }

    pub fn source(&self) -> &ModulePresentation {
        &self.source
    }

    pub fn target(&self) -> &ModulePresentation {
        &self.target
    }

    pub fn columns(&self) -> &[Vec<Polynomial>] {
        &self.columns
    }

    /// Entry `(j, i)`.
    pub fn entry(&self, j: usize, i: usize) -> &Polynomial {
        &self.columns[i][j]
    }

    pub fn apply(&self, x: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if x.len() != self.source.rank() {
            return Err(Error::ShapeMismatch(format!("vector of length {} for rank {}", x.len(), self.source.rank())));
        }
        let mut out = vec![self.target.algebra.zero(); self.target.rank()];
        for (xi, col) in x.iter().zip(&self.columns) {
            for (o, c) in out.iter_mut().zip(col) {
                *o = &*o + &(xi * c);
            }
        }
        Ok(out)
    }

    /// `k`-matrix of the map on staircase bases.
    pub fn fd_matrix(&self, sb: &FdModuleBasis, tb: &FdModuleBasis) -> Result<ExactMatrix> {
        let cols: Vec<Vec<Coeff>> = (0..sb.dim()).map(|k| tb.coordinates(&self.apply(&sb.basis_element(k))?)).collect::<Result<_>>()?;
        let rows = (0..tb.dim()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        ExactMatrix::from_rows(sb.domain(), sb.dim(), rows)
    }

    fn replay(&self, limits: &Limits) -> Result<Arc<ModuleReplay>> {
        Ok(Arc::new(ModuleReplay {
            source_gb: self.source.gb(limits)?,
            target_gb: self.target.gb(limits)?,
            columns: self.columns.clone(),
            target_relations: self.target.relations.clone(),
        }))
    }
}

/// Kernel of a module map: elements of the source, nonzero modulo its relations.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleKernel {
    pub generators: Vec<Vec<Polynomial>>,
}

impl ModuleKernel {
    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// `{x : v x ∈ L_N}` modulo `L_M`, by elimination in `B^(t+s)`.
pub fn module_map_kernel(v: &ModuleMap, limits: &Limits) -> Result<ModuleKernel> {
    let b = &v.source.algebra;
    let pre = preimage_of_submodule(b.ctx(), b.domain(), b.ideal(), &v.columns, &v.target.relations, limits)?;
    let sgb = v.source.gb(limits)?;
    let mut generators = Vec::new();
    for x in pre {
        let r = sgb.normal_form(&x)?;
        if r.iter().any(|p| !p.is_zero()) {
            generators.push(r);
        }
    }
    Ok(ModuleKernel { generators })
}

fn d_label(name: &str) -> String {
    format!("d{name}")
}

/// Jacobian presentation of `Ω_{B/R}`: generators `dy_j` for the relative
/// variables, one relation row per relative relation.
pub fn kahler_module(b: &Arc<AlgebraPresentation>, limits: &Limits) -> Result<ModulePresentation> {
    let nb = b.n_base();
    let labels = b.relative_vars().iter().map(|v| d_label(v)).collect();
    let rels = b
        .relative_relations()
        .into_iter()
        .map(|g| (nb..b.ctx().len()).map(|j| g.formal_partial(j)).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<Vec<_>, _>>()?;
    ModulePresentation::new(b.clone(), labels, rels, limits)
}

/// `f*Ω_{A/R} → Ω_{B/R} → Ω_{B/A} → 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentSequence {
    pub pullback: ModulePresentation,
    pub middle: ModulePresentation,
    pub v: ModuleMap,
    pub cokernel: ModulePresentation,
}

/// Partial derivatives of `p` with respect to the relative variables of `b`.
fn gradient(b: &AlgebraPresentation, p: &Polynomial) -> Result<Vec<Polynomial>> {
    Ok((b.n_base()..b.ctx().len()).map(|j| p.formal_partial(j)).collect::<std::result::Result<Vec<_>, _>>()?)
}

pub fn cotangent_map(f: &AlgebraMorphism, limits: &Limits) -> Result<CotangentSequence> {
    f.check_well_defined(limits)?;
    let a = f.source();
    let b = f.target();
    let na = a.n_base();
    let pull_labels: Vec<String> = a.relative_vars().iter().map(|v| d_label(v)).collect();
    let pull_rels = a
        .relative_relations()
        .into_iter()
        .map(|g| {
            (na..a.ctx().len())
                .map(|i| f.apply_raw(&g.formal_partial(i)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let pullback = ModulePresentation::new(b.clone(), pull_labels, pull_rels, limits)?;
    let middle = kahler_module(b, limits)?;
    let columns = f.images().iter().map(|im| gradient(b, im)).collect::<Result<Vec<_>>>()?;
    let v = ModuleMap::new(pullback.clone(), middle.clone(), columns, limits)?;
    let mut coker_rels = middle.relations().to_vec();
    coker_rels.extend(v.columns().iter().cloned());
    let cokernel = ModulePresentation::new(b.clone(), middle.labels().to_vec(), coker_rels, limits)?;
    Ok(CotangentSequence { pullback, middle, v, cokernel })
}

impl CotangentSequence {
    /// Image of `v` dies in the cokernel, and every middle generator killed
    /// in the cokernel lies in `im v + relations`.
    pub fn check_exactness(&self, limits: &Limits) -> Result<bool> {
        let cgb = self.cokernel.gb(limits)?;
        for c in self.v.columns() {
            if !cgb.contains(c)? {
                return Ok(false);
            }
        }
        for j in 0..self.middle.rank() {
            let e = self.middle.generator(j);
            if cgb.contains(&e)? {
                let b = self.middle.algebra();
                let lift = solve_lift(b.ctx(), b.domain(), b.ideal(), self.v.columns(), &e, self.middle.relations(), limits)?;
                if lift.is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Verdicts on `v`: injective, surjective, split injective, bijective.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentVerdicts {
    pub regime: Regime,
    pub monic: PredicateStatus,
    pub coker_zero: PredicateStatus,
    pub split_monic: PredicateStatus,
    pub iso: PredicateStatus,
}

pub const FD_REQUIRED: &str = "finite-dimensional regime required";

/// Finite-dimensional iff `B` has a finite staircase.
pub fn detect_regime(seq: &CotangentSequence, limits: &Limits) -> Result<Regime> {
    Ok(if crate::modlin::fd_basis(seq.middle.algebra(), limits)?.is_some() {
        Regime::FiniteDimensional
    } else {
        Regime::General
    })
}

pub fn classify_cotangent(seq: &CotangentSequence, regime: Regime, limits: &Limits) -> Result<CotangentVerdicts> {
    let v = &seq.v;
    let replay = v.replay(limits)?;
    let coker_zero = coker_verdict(seq, limits)?;
    let fd = match regime {
        Regime::FiniteDimensional => match (seq.pullback.fd_basis(limits)?, seq.middle.fd_basis(limits)?) {
            (Some(s), Some(t)) => Some((s, t)),
            _ => return Err(Error::NotFiniteDimensional("cotangent modules have infinite staircases".into())),
        },
        Regime::General => None,
    };
    let monic = match &fd {
        Some((sb, tb)) => {
            let m = v.fd_matrix(sb, tb)?;
            let rank = m.rank();
            if rank == sb.dim() {
                PredicateStatus::holds(Evidence::ModuleKernelTrivial {
                    method: "rank".into(),
                    dim_source: Some(sb.dim()),
                    rank: Some(rank),
                })
            } else {
                let k = m.kernel().into_iter().next().expect("rank deficit gives a kernel vector");
                PredicateStatus::fails(Evidence::ModuleKernelElement { element: sb.element(&k), replay: Some(replay.clone()) })
            }
        }
        None => {
            let ker = module_map_kernel(v, limits)?;
            match ker.generators.into_iter().next() {
                None => PredicateStatus::holds(Evidence::ModuleKernelTrivial { method: "gröbner".into(), dim_source: None, rank: None }),
                Some(x) => PredicateStatus::fails(Evidence::ModuleKernelElement { element: x, replay: Some(replay.clone()) }),
            }
        }
    };
    let split_monic = if monic.is_fails() {
        PredicateStatus::fails(Evidence::Derived { from: vec!["monic: fails".into()] })
    } else {
        match &fd {
            Some((sb, _)) => match retraction_solve(sb, v.target.rank(), v.target.relations(), v.columns())? {
                Some(images) => PredicateStatus::holds(Evidence::Retraction { images, replay: Some(replay.clone()) }),
                None => PredicateStatus::fails(Evidence::RetractionInfeasible {
                    unknowns: v.target.rank() * sb.dim(),
                    equations: (v.target.relations().len() + v.source.rank()) * sb.dim(),
                    reason: "exact linear system for r∘v = id is infeasible".into(),
                }),
            },
            None => general_split(seq, &replay, limits)?,
        }
    };
    let iso = match (monic.value(), coker_zero.value()) {
        (Some(m), Some(c)) => PredicateStatus::decided(
            m && c,
            Evidence::Derived { from: vec![format!("monic: {}", monic.status), format!("coker_zero: {}", coker_zero.status)] },
        ),
        _ => PredicateStatus::undetermined("monicity undecided"),
    };
    Ok(CotangentVerdicts { regime, monic, coker_zero, split_monic, iso })
}

fn coker_verdict(seq: &CotangentSequence, limits: &Limits) -> Result<PredicateStatus> {
    let cgb = seq.cokernel.gb(limits)?;
    for j in 0..seq.cokernel.rank() {
        let nf = cgb.normal_form(&seq.cokernel.generator(j))?;
        if nf.iter().any(|p| !p.is_zero()) {
            return Ok(PredicateStatus::fails(Evidence::CokernelGenerator {
                generator: seq.cokernel.labels()[j].clone(),
                normal_form: nf,
            }));
        }
    }
    Ok(PredicateStatus::holds(Evidence::CokernelTrivial { generators: seq.cokernel.rank() }))
}

/// Over a free source `B^s`, a retraction is a matrix `R` with `R·V = I` and
/// `R` killing the target relations; each row is one lifting problem.
fn general_split(seq: &CotangentSequence, replay: &Arc<ModuleReplay>, limits: &Limits) -> Result<PredicateStatus> {
    let v = &seq.v;
    if !v.source.is_free() {
        return Ok(PredicateStatus::undetermined(FD_REQUIRED));
    }
    let b = v.source.algebra();
    let s = v.source.rank();
    let t = v.target.rank();
    let rels = v.target.relations();
    // column j: (row j of V, entries of the relations at j)
    let columns: Vec<Vec<Polynomial>> = (0..t)
        .map(|j| {
            let mut c: Vec<Polynomial> = (0..s).map(|i| v.entry(j, i).clone()).collect();
            c.extend(rels.iter().map(|r| r[j].clone()));
            c
        })
        .collect();
    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(s);
    for k in 0..s {
        let mut rhs = vec![b.zero(); s + rels.len()];
        rhs[k] = b.one();
        match solve_lift(b.ctx(), b.domain(), b.ideal(), &columns, &rhs, &[], limits)? {
            Some(row) => rows.push(row),
            None => {
                return Ok(PredicateStatus::fails(Evidence::RetractionInfeasible {
                    unknowns: t,
                    equations: s + rels.len(),
                    reason: format!("row {k} of a retraction has no solution over the algebra"),
                }))
            }
        }
    }
    // r(e'_j) = (rows[0][j], ..., rows[s-1][j])
    let images = (0..t).map(|j| (0..s).map(|k| rows[k][j].clone()).collect()).collect();
    Ok(PredicateStatus::holds(Evidence::Retraction { images, replay: Some(replay.clone()) }))
}

/// `Ω_{B/A}` computed from `B` re-presented as an `A`-algebra.
pub fn relative_kahler(f: &AlgebraMorphism, limits: &Limits) -> Result<ModulePresentation> {
    f.check_well_defined(limits)?;
    let (rel, _) = relative_presentation(f)?;
    kahler_module(&rel, limits)
}

#[derive(Clone, Debug, PartialEq)]
pub enum BaseChangeVerdict {
    Holds { dimension: usize },
    Fails { reason: String },
    Undetermined(String),
}

/// Compares `Ω_{(B⊗_A C)/C}` with `Ω_{B/A} ⊗_B (B⊗_A C)` through the map
/// matching `dy ↦ dy`.
pub fn base_change_check(f: &AlgebraMorphism, g: &AlgebraMorphism, limits: &Limits) -> Result<BaseChangeVerdict> {
    let po = pushout(f, g, limits)?;
    let omega_ba = cotangent_map(f, limits)?.cokernel;
    let lhs = omega_ba.base_change(&po.left, limits)?;
    let rhs = cotangent_map(&po.right, limits)?.cokernel;
    let (Some(lb), Some(rb)) = (lhs.fd_basis(limits)?, rhs.fd_basis(limits)?) else {
        return Ok(BaseChangeVerdict::Undetermined(FD_REQUIRED.into()));
    };
    let p = &po.algebra;
    let mut columns = Vec::with_capacity(lhs.rank());
    for label in lhs.labels() {
        let j = rhs
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::ShapeMismatch(format!("generator {label} has no counterpart")))?;
        let mut col = vec![p.zero(); rhs.rank()];
        col[j] = p.one();
        columns.push(col);
    }
    let map = match ModuleMap::new(lhs, rhs, columns, limits) {
        Ok(m) => m,
        Err(Error::ShapeMismatch(r)) => return Ok(BaseChangeVerdict::Fails { reason: r }),
        Err(e) => return Err(e),
    };
    if lb.dim() != rb.dim() {
        return Ok(BaseChangeVerdict::Fails { reason: format!("dimensions differ: {} vs {}", lb.dim(), rb.dim()) });
    }
    let m = map.fd_matrix(&lb, &rb)?;
    if m.rank() == lb.dim() {
        Ok(BaseChangeVerdict::Holds { dimension: lb.dim() })
    } else {
        Ok(BaseChangeVerdict::Fails { reason: "generator-matching map is not invertible".into() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmoothnessHint {
    Yes,
    No,
    Undetermined,
}

impl std::fmt::Display for SmoothnessHint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SmoothnessHint::Yes => "yes",
            SmoothnessHint::No => "no",
            SmoothnessHint::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobianNote {
    pub formally_smooth_hint: SmoothnessHint,
    pub detail: String,
}

/// Split-injectivity of the conormal map `I/I² → ⊕ B·dy_j` for `B = P/I`,
/// `P` the polynomial ring over the base in the relative variables.
///
/// With `B` finite over the base, a split conormal sequence makes `B` smooth
/// and quasi-finite, hence `Ω_{B/R} = 0`. When `Ω_{B/R} = 0` the conormal map is
/// onto a free module, so it splits exactly when it is injective, which is a
/// dimension count: `dim I/I² = m·dim B`.
pub fn jacobian_smoothness_note(b: &Arc<AlgebraPresentation>, limits: &Limits) -> Result<JacobianNote> {
    let undetermined = |d: &str| JacobianNote { formally_smooth_hint: SmoothnessHint::Undetermined, detail: d.into() };
    let gens: Vec<Polynomial> = b.relative_relations().into_iter().cloned().collect();
    if gens.is_empty() {
        return Ok(JacobianNote { formally_smooth_hint: SmoothnessHint::Yes, detail: "polynomial algebra: conormal module is 0".into() });
    }
    let Some(bb) = crate::modlin::fd_basis(b, limits)? else {
        return Ok(undetermined(FD_REQUIRED));
    };
    if !kahler_module(b, limits)?.is_zero(limits)? {
        return Ok(JacobianNote {
            formally_smooth_hint: SmoothnessHint::No,
            detail: "Ω_{B/R} ≠ 0 for a finite algebra, so I/I² → Ω_P⊗B does not split; violates the Jacobian criterion".into(),
        });
    }
    let base_ideal: Vec<Polynomial> = b.ideal().iter().filter(|g| !gens.contains(g)).cloned().collect();
    let mut sq = base_ideal;
    for (i, g) in gens.iter().enumerate() {
        for h in &gens[i..] {
            sq.push(g * h);
        }
    }
    let Some(vb) = FdModuleBasis::new(b.ctx(), b.domain(), 1, &sq, &[], limits)? else {
        return Ok(undetermined(FD_REQUIRED));
    };
    let w = vb.dim() - bb.dim();
    let free = b.n_relative() * bb.dim();
    Ok(if w == free {
        JacobianNote { formally_smooth_hint: SmoothnessHint::Yes, detail: format!("conormal map splits (dim I/I² = {w})") }
    } else {
        JacobianNote {
            formally_smooth_hint: SmoothnessHint::No,
            detail: format!(
                "conormal map I/I² → Ω_P⊗B is onto but not injective (dim I/I² = {w} > {free}); violates the Jacobian criterion"
            ),
        }
    })
}
