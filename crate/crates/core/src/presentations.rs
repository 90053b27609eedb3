//! Finitely presented (relative) algebras over a prime field or ℚ and their
//! morphisms: the object layer of the commutative-algebra and affine instances.

use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, ring_map_kernel, GroebnerBasis, Limits};
use crate::modlin::{self, ExactMatrix, Regime};
use crate::polycore::{parse_polynomial, CoefficientDomain, PolyParseError, Polynomial, TermOrder, VariableContext};

/// `k[base vars, relative vars] / ideal`. Base variables form a prefix and the
/// base ideal generators are part of `ideal`.
#[derive(Debug)]
pub struct AlgebraPresentation {
    name: String,
    domain: CoefficientDomain,
    base: Option<Arc<AlgebraPresentation>>,
    ctx: Arc<VariableContext>,
    n_base: usize,
    ideal: Vec<Polynomial>,
    gb_cache: Mutex<Vec<(Limits, GroebnerBasis)>>,
}

impl Clone for AlgebraPresentation {
    fn clone(&self) -> Self {
        AlgebraPresentation {
            name: self.name.clone(),
            domain: self.domain,
            base: self.base.clone(),
            ctx: self.ctx.clone(),
            n_base: self.n_base,
            ideal: self.ideal.clone(),
            gb_cache: Mutex::new(self.gb_cache.lock().expect("cache lock").clone()),
        }
    }
}

impl PartialEq for AlgebraPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.ctx == other.ctx
            && self.n_base == other.n_base
            && self.ideal == other.ideal
            && self.base == other.base
    }
}

impl AlgebraPresentation {
    /// `relations` live in the flattened context `base vars ++ relative vars`.
    pub fn new(
        name: impl Into<String>,
        domain: CoefficientDomain,
        base: Option<Arc<AlgebraPresentation>>,
        relative_vars: Vec<String>,
        relations: Vec<Polynomial>,
    ) -> Result<Self> {
        if !domain.is_field() {
            return Err(Error::UnsupportedDomain(domain));
        }
        let mut names: Vec<String> = Vec::new();
        let mut ideal = Vec::new();
        let mut n_base = 0;
        if let Some(b) = &base {
            if b.domain != domain {
                return Err(Error::BaseMismatch(format!("base `{}` is over {}, algebra over {}", b.name, b.domain, domain)));
            }
            names.extend(b.ctx.names().iter().cloned());
            n_base = names.len();
        }
        let blocks = vec![n_base, relative_vars.len()];
        names.extend(relative_vars);
        let ctx = Arc::new(VariableContext::with_blocks(names, blocks)?);
        if let Some(b) = &base {
            let map: Vec<usize> = (0..b.ctx.len()).collect();
            ideal.extend(b.ideal.iter().map(|g| g.remap(&ctx, &map)));
        }
        for r in relations {
            if r.ctx() != &ctx || r.domain() != domain {
                return Err(Error::AlgebraMismatch(format!("relation {r} is not in the context of `{}`", name_of(&ctx))));
            }
            if !r.is_zero() && !ideal.contains(&r) {
                ideal.push(r);
            }
        }
        Ok(AlgebraPresentation { name: name.into(), domain, base, ctx, n_base, ideal, gb_cache: Mutex::new(Vec::new()) })
    }

    /// Builds the context first so relations can be parsed against it.
    pub fn context_for(base: Option<&AlgebraPresentation>, relative_vars: &[String]) -> Result<Arc<VariableContext>> {
        let mut names: Vec<String> = base.map(|b| b.ctx.names().to_vec()).unwrap_or_default();
        let nb = names.len();
        names.extend(relative_vars.iter().cloned());
        Ok(Arc::new(VariableContext::with_blocks(names, vec![nb, relative_vars.len()])?))
    }

    pub fn polynomial_ring(name: impl Into<String>, domain: CoefficientDomain, vars: &[&str]) -> Result<Self> {
        Self::new(name, domain, None, vars.iter().map(|s| s.to_string()).collect(), vec![])
    }

    /// The ground field as an algebra over itself.
    pub fn field(domain: CoefficientDomain) -> Result<Self> {
        Self::new(domain.to_string(), domain, None, vec![], vec![])
    }

    /// `R` regarded as an algebra over `R` (no relative variables).
    pub fn over_itself(base: &Arc<AlgebraPresentation>) -> Result<Self> {
        Self::new(base.name.clone(), base.domain, Some(base.clone()), vec![], vec![])
    }

    /// Same ring with every variable relative to the ground field.
    pub fn flattened(&self) -> AlgebraPresentation {
        if self.base.is_none() {
            return self.clone();
        }
        let ctx = Arc::new(VariableContext::new(self.ctx.names().to_vec()).expect("distinct names"));
        let map: Vec<usize> = (0..ctx.len()).collect();
        AlgebraPresentation {
            name: self.name.clone(),
            domain: self.domain,
            base: None,
            ideal: self.ideal.iter().map(|g| g.remap(&ctx, &map)).collect(),
            ctx,
            n_base: 0,
            gb_cache: Mutex::new(Vec::new()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn base(&self) -> Option<&Arc<AlgebraPresentation>> {
        self.base.as_ref()
    }

    pub fn base_name(&self) -> String {
        self.base.as_ref().map(|b| b.name.clone()).unwrap_or_else(|| self.domain.to_string())
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn n_base(&self) -> usize {
        self.n_base
    }

    pub fn n_relative(&self) -> usize {
        self.ctx.len() - self.n_base
    }

    pub fn relative_vars(&self) -> &[String] {
        &self.ctx.names()[self.n_base..]
    }

    /// Relations that are not inherited from the base.
    pub fn relative_relations(&self) -> Vec<&Polynomial> {
        let inherited = self.base.as_ref().map_or(0, |b| b.ideal.len());
        self.ideal.iter().skip(inherited).collect()
    }

    pub fn ideal(&self) -> &[Polynomial] {
        &self.ideal
    }

    pub fn parse(&self, text: &str) -> std::result::Result<Polynomial, PolyParseError> {
        parse_polynomial(text, &self.ctx, self.domain)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(&self.ctx, self.domain)
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(&self.ctx, self.domain)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ctx, self.domain, i)
    }

    /// Reduced grevlex Gröbner basis of the flattened ideal, memoized per limit setting.
    pub fn gb(&self, limits: &Limits) -> Result<GroebnerBasis> {
        {
            let cache = self.gb_cache.lock().expect("cache lock");
            if let Some((_, gb)) = cache.iter().find(|(l, _)| l == limits) {
                return Ok(gb.clone());
            }
        }
        let gb = buchberger(&self.ctx, self.domain, &self.ideal, TermOrder::GrevLex, limits)?;
        self.gb_cache.lock().expect("cache lock").push((*limits, gb.clone()));
        Ok(gb)
    }

    pub fn reduce(&self, p: &Polynomial, limits: &Limits) -> Result<Polynomial> {
        Ok(self.gb(limits)?.normal_form(p)?)
    }

    pub fn is_zero_algebra(&self, limits: &Limits) -> Result<bool> {
        Ok(self.gb(limits)?.is_unit_ideal())
    }

    fn fresh_name(&self, prefix: &str) -> String {
        (0..).map(|k| format!("{prefix}{k}")).find(|n| self.ctx.index_of(n).is_none()).expect("unbounded")
    }
}

fn name_of(ctx: &VariableContext) -> String {
    format!("({})", ctx.names().join(", "))
}

/// Record that every source relation maps to zero in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellDefinedCertificate {
    /// (relation, its image before reduction); each image reduces to 0.
    pub reductions: Vec<(Polynomial, Polynomial)>,
}

/// `f: A -> B` given by images of the relative source variables.
/// Morphisms not over a base act on the flattened presentations.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    name: String,
    source: Arc<AlgebraPresentation>,
    target: Arc<AlgebraPresentation>,
    images: Vec<Polynomial>,
    over_base: bool,
    certificate: OnceLock<WellDefinedCertificate>,
}

impl AlgebraMorphism {
    /// Unchecked construction; see [`check_well_defined`](Self::check_well_defined).
    pub fn new(
        name: impl Into<String>,
        source: Arc<AlgebraPresentation>,
        target: Arc<AlgebraPresentation>,
        images: Vec<Polynomial>,
        over_base: bool,
    ) -> Result<Self> {
        let name = name.into();
        let (source, target) = if over_base {
            if source.base != target.base || source.base.is_none() {
                return Err(Error::BaseMismatch(format!(
                    "`{name}`: source is over {}, target over {}",
                    source.base_name(),
                    target.base_name()
                )));
            }
            (source, target)
        } else {
            (Arc::new(source.flattened()), Arc::new(target.flattened()))
        };
        if source.domain != target.domain {
            return Err(Error::AlgebraMismatch(format!("`{name}`: coefficient domains differ")));
        }
        if images.len() != source.n_relative() {
            return Err(Error::ArityMismatch(format!(
                "`{name}` needs {} images, got {}",
                source.n_relative(),
                images.len()
            )));
        }
        for im in &images {
            if im.ctx() != target.ctx() || im.domain() != target.domain {
                return Err(Error::AlgebraMismatch(format!("`{name}`: image {im} is not in the target context")));
            }
        }
        Ok(AlgebraMorphism { name, source, target, images, over_base, certificate: OnceLock::new() })
    }

    /// Builds and checks well-definedness in one step.
    pub fn checked(
        name: impl Into<String>,
        source: Arc<AlgebraPresentation>,
        target: Arc<AlgebraPresentation>,
        images: Vec<Polynomial>,
        over_base: bool,
        limits: &Limits,
    ) -> Result<Self> {
        let f = Self::new(name, source, target, images, over_base)?;
        f.check_well_defined(limits)?;
        Ok(f)
    }

    pub fn identity(a: &Arc<AlgebraPresentation>) -> Self {
        let over_base = a.base.is_some();
        let a = if over_base { a.clone() } else { Arc::new(a.flattened()) };
        let images = (a.n_base..a.ctx.len()).map(|i| a.var(i)).collect();
        let f = AlgebraMorphism {
            name: format!("id_{}", a.name),
            source: a.clone(),
            target: a,
            images,
            over_base,
            certificate: OnceLock::new(),
        };
        let _ = f.certificate.set(WellDefinedCertificate { reductions: vec![] });
        f
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<AlgebraPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraPresentation> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn over_base(&self) -> bool {
        self.over_base
    }

    pub fn base_name(&self) -> String {
        if self.over_base {
            self.source.base_name()
        } else {
            self.source.domain.to_string()
        }
    }

    /// Images of every flattened source variable (base variables map to themselves).
    pub fn full_images(&self) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = (0..self.source.n_base).map(|i| self.target.var(i)).collect();
        out.extend(self.images.iter().cloned());
        out
    }

    /// `f(p)` before reduction in the target.
    pub fn apply_raw(&self, p: &Polynomial) -> Result<Polynomial> {
        Ok(p.substitute_into(&self.full_images(), self.target.ctx(), self.target.domain)?)
    }

    /// `f(p)` reduced in the target.
    pub fn apply(&self, p: &Polynomial, limits: &Limits) -> Result<Polynomial> {
        self.target.reduce(&self.apply_raw(p)?, limits)
    }

    pub fn check_well_defined(&self, limits: &Limits) -> Result<&WellDefinedCertificate> {
        if let Some(c) = self.certificate.get() {
            return Ok(c);
        }
        let mut reductions = Vec::new();
        for g in &self.source.ideal {
            let image = self.apply_raw(g)?;
            let nf = self.target.reduce(&image, limits)?;
            if !nf.is_zero() {
                return Err(Error::IllDefinedMorphism {
                    morphism: self.name.clone(),
                    relation: g.to_string(),
                    normal_form: nf.to_string(),
                });
            }
            reductions.push((g.clone(), image));
        }
        let _ = self.certificate.set(WellDefinedCertificate { reductions });
        Ok(self.certificate.get().expect("just set"))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if self.target != g.source || self.over_base != g.over_base {
            return Err(Error::AlgebraMismatch(format!("cannot compose `{}` with `{}`", self.name, g.name)));
        }
        let images = self.images.iter().map(|p| g.apply_raw(p)).collect::<Result<Vec<_>>>()?;
        AlgebraMorphism::new(
            format!("{}∘{}", g.name, self.name),
            self.source.clone(),
            g.target.clone(),
            images,
            self.over_base,
        )
    }
}

pub fn check_well_defined<'a>(f: &'a AlgebraMorphism, limits: &Limits) -> Result<&'a WellDefinedCertificate> {
    f.check_well_defined(limits)
}

/// Injectivity decision with the kernel generators as evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityVerdict {
    pub injective: bool,
    /// Nonzero kernel generators in the source (empty iff injective).
    pub kernel: Vec<Polynomial>,
}

pub fn is_injective(f: &AlgebraMorphism, limits: &Limits) -> Result<InjectivityVerdict> {
    let kernel = ring_map_kernel(f, limits)?;
    Ok(InjectivityVerdict { injective: kernel.is_empty(), kernel })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityVerdict {
    pub surjective: bool,
    /// Per flattened target variable: a source preimage, or the normal form
    /// that still mentions target variables.
    pub preimages: Vec<std::result::Result<Polynomial, String>>,
}

impl SurjectivityVerdict {
    pub fn missing(&self) -> Option<(usize, &String)> {
        self.preimages.iter().enumerate().find_map(|(i, p)| p.as_ref().err().map(|e| (i, e)))
    }
}

/// Target variable `y_j` lies in the image iff its normal form modulo the graph
/// ideal (target block eliminated first) involves source variables only.
pub fn is_surjective(f: &AlgebraMorphism, limits: &Limits) -> Result<SurjectivityVerdict> {
    f.check_well_defined(limits)?;
    if f.source.domain.is_field() {
        if let Some(img) = crate::groebner::kernels::fd_image(f, limits)? {
            let tgb = f.target.gb(limits)?;
            let zero = Polynomial::zero(f.source.ctx(), f.source.domain);
            let mut preimages = Vec::with_capacity(f.target.ctx.len());
            for j in 0..f.target.ctx.len() {
                let y = tgb.normal_form(&f.target.var(j))?;
                preimages.push(match img.preimage(&y, &zero) {
                    Ok(pre) => Ok(f.source.reduce(&pre, limits)?),
                    Err(rest) => Err(format!("{} has image remainder {}", f.target.ctx.name(j), rest)),
                });
            }
            let surjective = preimages.iter().all(|p| p.is_ok());
            return Ok(SurjectivityVerdict { surjective, preimages });
        }
    }
    let graph = crate::groebner::graph_ideal(f, limits)?;
    let m = f.target.ctx.len();
    let n = f.source.ctx.len();
    let mut preimages = Vec::with_capacity(m);
    for j in 0..m {
        let y = Polynomial::var(graph.ctx(), f.source.domain, j);
        let nf = graph.normal_form(&y)?;
        if (0..m).any(|i| nf.uses_var(i)) {
            preimages.push(Err(format!("{} ≡ {}", f.target.ctx.name(j), nf)));
        } else {
            let back: Vec<usize> = (0..m + n).map(|i| i.saturating_sub(m)).collect();
            let pre = nf.remap(f.source.ctx(), &back);
            preimages.push(Ok(f.source.reduce(&pre, limits)?));
        }
    }
    let surjective = preimages.iter().all(|p| p.is_ok());
    Ok(SurjectivityVerdict { surjective, preimages })
}

/// `A[ε] = A[e]/(e²)` with a fresh reserved variable name.
pub fn dual_numbers(a: &AlgebraPresentation) -> Result<AlgebraPresentation> {
    let e = a.fresh_name("@e");
    let mut rel: Vec<String> = a.relative_vars().to_vec();
    rel.push(e);
    let ctx = AlgebraPresentation::context_for(a.base.as_deref(), &rel)?;
    let map: Vec<usize> = (0..a.ctx.len()).collect();
    let mut relations: Vec<Polynomial> = a.relative_relations().into_iter().map(|g| g.remap(&ctx, &map)).collect();
    let ev = Polynomial::var(&ctx, a.domain, ctx.len() - 1);
    relations.push(&ev * &ev);
    AlgebraPresentation::new(format!("{}[ε]", a.name), a.domain, a.base.clone(), rel, relations)
}

/// `f[ε]`: applies `f` to the original variables and fixes `e`.
pub fn dual_numbers_map(f: &AlgebraMorphism) -> Result<AlgebraMorphism> {
    let ta = Arc::new(dual_numbers(&f.source)?);
    let tb = Arc::new(dual_numbers(&f.target)?);
    let map: Vec<usize> = (0..f.target.ctx.len()).collect();
    let mut images: Vec<Polynomial> = f.images.iter().map(|p| p.remap(tb.ctx(), &map)).collect();
    images.push(tb.var(tb.ctx.len() - 1));
    AlgebraMorphism::new(format!("{}[ε]", f.name), ta, tb, images, f.over_base)
}

/// Element `(a, b)` of the semidirect product `A ⋉ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectElement {
    pub first: Polynomial,
    pub second: Polynomial,
}

/// Horizontal descent in commutative algebras: `a + a'ε ↦ (a, f(a'))`.
pub fn theta_calg_eval(f: &AlgebraMorphism, a: &Polynomial, a_prime: &Polynomial, limits: &Limits) -> Result<SemidirectElement> {
    f.check_well_defined(limits)?;
    Ok(SemidirectElement { first: f.source.reduce(a, limits)?, second: f.apply(a_prime, limits)? })
}

/// Splits an element of `A[ε]` (as produced by [`dual_numbers`]) into `(a, a')`
/// and applies the horizontal descent.
pub fn theta_calg_on_dual(f: &AlgebraMorphism, dual: &AlgebraPresentation, p: &Polynomial, limits: &Limits) -> Result<SemidirectElement> {
    let e = dual.ctx.len() - 1;
    let p = dual.reduce(p, limits)?;
    let mut a = f.source.zero();
    let mut a1 = f.source.zero();
    for (m, c) in p.terms() {
        let mut ex = m.exponents().to_vec();
        let de = ex[e];
        ex[e] = 0;
        let mono = crate::polycore::Monomial::from_exponents(ex[..f.source.ctx.len()].to_vec());
        let t = Polynomial::from_terms(f.source.ctx(), f.source.domain, [(mono, c.clone())]);
        match de {
            0 => a = &a + &t,
            1 => a1 = &a1 + &t,
            _ => {}
        }
    }
    theta_calg_eval(f, &a, &a1, limits)
}

/// `(a,b)(x,y) = (ax, f(a)y + b f(x))`.
pub fn semidirect_mul(f: &AlgebraMorphism, u: &SemidirectElement, v: &SemidirectElement, limits: &Limits) -> Result<SemidirectElement> {
    for s in [&u.first, &v.first] {
        if s.ctx() != f.source.ctx() {
            return Err(Error::AlgebraMismatch("first component not in the source".into()));
        }
    }
    for s in [&u.second, &v.second] {
        if s.ctx() != f.target.ctx() {
            return Err(Error::AlgebraMismatch("second component not in the target".into()));
        }
    }
    let first = f.source.reduce(&(&u.first * &v.first), limits)?;
    let second = &(&f.apply_raw(&u.first)? * &v.second) + &(&u.second * &f.apply_raw(&v.first)?);
    Ok(SemidirectElement { first, second: f.target.reduce(&second, limits)? })
}

/// Kernel generators of `f`; the relative tangent bundle is `A ⋉ Ker(f)`.
pub fn relative_tangent_calg(f: &AlgebraMorphism, limits: &Limits) -> Result<Vec<Polynomial>> {
    Ok(ring_map_kernel(f, limits)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionVerdict {
    /// `a` with `f(a) = 1` and `a·Ker(f) = 0`; `s(b) = a'·a` for any preimage `a'` of `b`.
    Holds { witness: Polynomial, kernel: Vec<Polynomial> },
    Fails { kernel: Vec<Polynomial>, reason: String },
    Undetermined(String),
}

/// Decides whether a surjection `f: A -> B` has an `A`-linear section.
/// The regime is detected from the source staircase.
pub fn linear_section_exists(f: &AlgebraMorphism, limits: &Limits) -> Result<SectionVerdict> {
    let regime = if modlin::fd_basis(&f.source, limits)?.is_some() { Regime::FiniteDimensional } else { Regime::General };
    linear_section_exists_in(f, regime, limits)
}

pub fn linear_section_exists_in(f: &AlgebraMorphism, regime: Regime, limits: &Limits) -> Result<SectionVerdict> {
    let surj = is_surjective(f, limits)?;
    if let Some((j, _)) = surj.missing() {
        return Err(Error::NotSurjective { morphism: f.name.clone(), variable: f.target.ctx.name(j).to_string() });
    }
    let kernel = ring_map_kernel(f, limits)?;
    match regime {
        Regime::FiniteDimensional => section_fd(f, kernel, limits),
        Regime::General => section_general(f, kernel, limits),
    }
}

fn section_fd(f: &AlgebraMorphism, kernel: Vec<Polynomial>, limits: &Limits) -> Result<SectionVerdict> {
    let Some(sa) = modlin::fd_basis(&f.source, limits)? else {
        return Ok(SectionVerdict::Undetermined("finite-dimensional regime required".into()));
    };
    let Some(sb) = modlin::fd_basis(&f.target, limits)? else {
        return Ok(SectionVerdict::Undetermined("finite-dimensional regime required".into()));
    };
    let domain = f.source.domain;
    // unknown a = Σ α_s s over the source staircase
    let n = sa.dim();
    let mut rows: Vec<Vec<crate::polycore::Coeff>> = Vec::new();
    let mut rhs: Vec<crate::polycore::Coeff> = Vec::new();
    // f(a) = 1 in B
    let images: Vec<Vec<_>> = sa.monomials().iter().map(|m| sb.coordinates(&f.apply(&sa.element(m), limits)?, limits)).collect::<Result<_>>()?;
    let one = sb.coordinates(&f.target.one(), limits)?;
    for r in 0..sb.dim() {
        rows.push((0..n).map(|c| images[c][r].clone()).collect());
        rhs.push(one[r].clone());
    }
    // a·k = 0 in A
    for k in &kernel {
        let prods: Vec<Vec<_>> = sa.monomials().iter().map(|m| sa.coordinates(&(&sa.element(m) * k), limits)).collect::<Result<_>>()?;
        for r in 0..n {
            rows.push((0..n).map(|c| prods[c][r].clone()).collect());
            rhs.push(crate::polycore::Coeff::zero());
        }
    }
    let m = ExactMatrix::from_rows(domain, n, rows)?;
    match modlin::solve(&m, &rhs)? {
        Some(sol) => {
            let witness = sa.element_from_coordinates(&sol);
            Ok(SectionVerdict::Holds { witness, kernel })
        }
        None => Ok(SectionVerdict::Fails {
            kernel,
            reason: "no a with f(a) = 1 annihilates the kernel (exact linear solve infeasible)".into(),
        }),
    }
}

fn section_general(f: &AlgebraMorphism, kernel: Vec<Polynomial>, limits: &Limits) -> Result<SectionVerdict> {
    let a = &f.source;
    if kernel.is_empty() {
        return Ok(SectionVerdict::Holds { witness: a.one(), kernel });
    }
    // Ann(K) as the kernel of a ↦ (a k_1, ..., a k_r) on A
    let column = vec![kernel.clone()];
    let ann = crate::groebner::preimage_of_submodule(a.ctx(), a.domain, a.ideal(), &column, &[], limits)?;
    let ann: Vec<Polynomial> = ann.into_iter().map(|mut v| v.remove(0)).collect();
    // 1 = Σ c_i h_i + (K + I_A): lift with cofactors on the annihilator part
    let relations: Vec<Vec<Polynomial>> = kernel.iter().map(|k| vec![k.clone()]).collect();
    let columns: Vec<Vec<Polynomial>> = ann.iter().map(|h| vec![h.clone()]).collect();
    let lift = crate::groebner::solve_lift(a.ctx(), a.domain, a.ideal(), &columns, &[a.one()], &relations, limits)?;
    match lift {
        Some(c) => {
            let mut w = a.zero();
            for (ci, hi) in c.iter().zip(&ann) {
                w = &w + &(ci * hi);
            }
            Ok(SectionVerdict::Holds { witness: a.reduce(&w, limits)?, kernel })
        }
        None => Ok(SectionVerdict::Fails {
            kernel,
            reason: "1 is not in Ann(Ker f) + Ker f, so no a with f(a) = 1 annihilates the kernel".into(),
        }),
    }
}

/// `B ⊗_A C` with its two coprojections.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub algebra: Arc<AlgebraPresentation>,
    pub left: AlgebraMorphism,
    pub right: AlgebraMorphism,
}

pub fn pushout(f: &AlgebraMorphism, g: &AlgebraMorphism, limits: &Limits) -> Result<Pushout> {
    if f.source != g.source || f.over_base != g.over_base {
        return Err(Error::BaseMismatch(format!("`{}` and `{}` do not share a source over the same base", f.name, g.name)));
    }
    f.check_well_defined(limits)?;
    g.check_well_defined(limits)?;
    let b = &f.target;
    let c = &g.target;
    let base = b.base.clone();
    let mut rel: Vec<String> = b.relative_vars().to_vec();
    let nb = b.n_base;
    for v in c.relative_vars() {
        let mut name = v.clone();
        while rel.contains(&name) || b.ctx.names()[..nb].contains(&name) {
            name.push('\'');
        }
        rel.push(name);
    }
    let ctx = AlgebraPresentation::context_for(base.as_deref(), &rel)?;
    let bmap: Vec<usize> = (0..b.ctx.len()).collect();
    let cmap: Vec<usize> = (0..c.ctx.len()).map(|i| if i < nb { i } else { i + b.n_relative() }).collect();
    let mut relations: Vec<Polynomial> = b.relative_relations().into_iter().map(|p| p.remap(&ctx, &bmap)).collect();
    relations.extend(c.relative_relations().into_iter().map(|p| p.remap(&ctx, &cmap)));
    for (fi, gi) in f.images.iter().zip(&g.images) {
        relations.push(&fi.remap(&ctx, &bmap) - &gi.remap(&ctx, &cmap));
    }
    let name = format!("{}⊗{}", b.name, c.name);
    let p = Arc::new(AlgebraPresentation::new(name, b.domain, base, rel, relations)?);
    let left_images = (nb..b.ctx.len()).map(|i| p.var(bmap[i])).collect();
    let right_images = (nb..c.ctx.len()).map(|i| p.var(cmap[i])).collect();
    let left = AlgebraMorphism::new(format!("ι_{}", b.name), b.clone(), p.clone(), left_images, f.over_base)?;
    let right = AlgebraMorphism::new(format!("ι_{}", c.name), c.clone(), p.clone(), right_images, f.over_base)?;
    Ok(Pushout { algebra: p, left, right })
}

/// `B` re-presented as an algebra over `A` via `f`: variables of `A` (flattened)
/// form the base block, the relative variables of `B` follow, and the ideal
/// adds the identifications `x - f(x)`.
pub fn relative_presentation(f: &AlgebraMorphism) -> Result<(Arc<AlgebraPresentation>, Vec<usize>)> {
    let a = Arc::new(f.source.flattened());
    let b = &f.target;
    let na = a.ctx.len();
    let nb_base = f.source.n_base;
    let rel: Vec<String> = b.relative_vars().iter().map(|v| {
        let mut n = v.clone();
        while a.ctx.index_of(&n).is_some() {
            n.push('\'');
        }
        n
    }).collect();
    let ctx = AlgebraPresentation::context_for(Some(&a), &rel)?;
    // B's flattened variables inside the combined context
    let bmap: Vec<usize> = (0..b.ctx.len()).map(|i| if i < b.n_base { i } else { na + i - b.n_base }).collect();
    let mut relations: Vec<Polynomial> = b.ideal().iter().map(|g| g.remap(&ctx, &bmap)).collect();
    for (k, im) in f.images.iter().enumerate() {
        let x = Polynomial::var(&ctx, a.domain, nb_base + k);
        relations.push(&x - &im.remap(&ctx, &bmap));
    }
    let p = AlgebraPresentation::new(format!("{}/{}", b.name, a.name), a.domain, Some(a), rel, relations)?;
    Ok((Arc::new(p), bmap))
}
