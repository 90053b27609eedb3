//! Polynomial maps between powers `X^n` as a Cartesian differential category:
//! the differential combinator, tangent functor, horizontal descent, structure
//! maps, identity verification, section linearization and the linear classifier.

mod linear;

use std::sync::Arc;

use num_traits::Zero;

pub use linear::{classify_cdc_map, classify_linear};

use crate::error::{Error, Result};
use crate::oracle::{identity_check, OracleConfig, OracleVerdict};
use crate::polycore::{parse_polynomial, Coeff, CoefficientDomain, PolyParseError, Polynomial, VariableContext};

/// `n → m`: `m` polynomials in one context of `n` variables. Equality ignores the name.
#[derive(Clone, Debug)]
pub struct CdcMap {
    name: String,
    domain: CoefficientDomain,
    ctx: Arc<VariableContext>,
    components: Vec<Polynomial>,
}

impl PartialEq for CdcMap {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.ctx == other.ctx && self.components == other.components
    }
}

impl Eq for CdcMap {}

/// Names `x1..xn`.
pub fn standard_context(n: usize) -> Arc<VariableContext> {
    VariableContext::arc((1..=n).map(|i| format!("x{i}")))
}

/// Names `x1..xn, w1..wm` used for section inputs.
pub fn section_context(n: usize, m: usize) -> Arc<VariableContext> {
    VariableContext::arc((1..=n).map(|i| format!("x{i}")).chain((1..=m).map(|j| format!("w{j}"))))
}

impl CdcMap {
    pub fn new(name: impl Into<String>, domain: CoefficientDomain, ctx: Arc<VariableContext>, components: Vec<Polynomial>) -> Result<Self> {
        for c in &components {
            if c.ctx() != &ctx || c.domain() != domain {
                return Err(Error::ArityMismatch(format!("component {c} is not a polynomial in {} over {domain}", ctx.names().join(", "))));
            }
        }
        Ok(CdcMap { name: name.into(), domain, ctx, components })
    }

    /// Parses components in the variables `x1..xn`.
    pub fn parse(name: impl Into<String>, domain: CoefficientDomain, n: usize, components: &[&str]) -> std::result::Result<Self, PolyParseError> {
        Self::parse_in(name, domain, standard_context(n), components)
    }

    pub fn parse_in(
        name: impl Into<String>,
        domain: CoefficientDomain,
        ctx: Arc<VariableContext>,
        components: &[&str],
    ) -> std::result::Result<Self, PolyParseError> {
        let components = components.iter().map(|c| parse_polynomial(c, &ctx, domain)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CdcMap { name: name.into(), domain, ctx, components })
    }

    fn from_parts(name: impl Into<String>, domain: CoefficientDomain, n: usize, components: Vec<Polynomial>) -> Self {
        let ctx = standard_context(n);
        let components = components.into_iter().map(|c| if c.ctx() == &ctx { c } else { c.remap(&ctx, &(0..n).collect::<Vec<_>>()) }).collect();
        CdcMap { name: name.into(), domain, ctx, components }
    }

    pub fn identity(domain: CoefficientDomain, n: usize) -> Self {
        let ctx = standard_context(n);
        let components = (0..n).map(|i| Polynomial::var(&ctx, domain, i)).collect();
        CdcMap { name: format!("id{n}"), domain, ctx, components }
    }

    /// Picks coordinates `indices` out of `X^n`.
    pub fn projection(domain: CoefficientDomain, n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let ctx = standard_context(n);
        let components = indices.into_iter().map(|i| Polynomial::var(&ctx, domain, i)).collect();
        CdcMap { name: "π".into(), domain, ctx, components }
    }

    /// `x ↦ M x` for an `m × n` matrix.
    pub fn linear(name: impl Into<String>, domain: CoefficientDomain, rows: &[Vec<Coeff>], n: usize) -> Self {
        let ctx = standard_context(n);
        let components = rows
            .iter()
            .map(|r| {
                let mut p = Polynomial::zero(&ctx, domain);
                for (i, c) in r.iter().enumerate() {
                    if !c.is_zero() {
                        p = &p + &Polynomial::var(&ctx, domain, i).scale(c);
                    }
                }
                p
            })
            .collect();
        CdcMap { name: name.into(), domain, ctx, components }
    }

    pub fn zero_map(domain: CoefficientDomain, n: usize, m: usize) -> Self {
        let ctx = standard_context(n);
        CdcMap { name: "0".into(), domain, components: vec![Polynomial::zero(&ctx, domain); m], ctx }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn arity(&self) -> usize {
        self.ctx.len()
    }

    pub fn coarity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Same polynomials read in `x1..xn`.
    pub fn standardized(&self) -> CdcMap {
        Self::from_parts(self.name.clone(), self.domain, self.arity(), self.components.clone())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &CdcMap) -> Result<CdcMap> {
        if g.arity() != self.coarity() || g.domain != self.domain {
            return Err(Error::ArityMismatch(format!(
                "cannot compose {} → {} with {} → {}",
                self.arity(),
                self.coarity(),
                g.arity(),
                g.coarity()
            )));
        }
        let components = g
            .components
            .iter()
            .map(|c| c.substitute_into(&self.components, &self.ctx, self.domain))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CdcMap { name: format!("{}∘{}", g.name, self.name), domain: self.domain, ctx: self.ctx.clone(), components })
    }

    /// `⟨self, g⟩`.
    pub fn pair(&self, g: &CdcMap) -> Result<CdcMap> {
        if g.ctx != self.ctx || g.domain != self.domain {
            return Err(Error::ArityMismatch("pairing needs a common domain".into()));
        }
        let mut components = self.components.clone();
        components.extend(g.components.iter().cloned());
        Ok(CdcMap { name: format!("⟨{},{}⟩", self.name, g.name), domain: self.domain, ctx: self.ctx.clone(), components })
    }

    /// `self × g` acting on disjoint blocks of variables.
    pub fn product(&self, g: &CdcMap) -> Result<CdcMap> {
        let (n1, n2) = (self.arity(), g.arity());
        let left = self.then_inputs(&CdcMap::projection(self.domain, n1 + n2, 0..n1))?;
        let right = g.then_inputs(&CdcMap::projection(self.domain, n1 + n2, n1..n1 + n2))?;
        left.pair(&right)
    }

    /// `self ∘ h`.
    pub fn then_inputs(&self, h: &CdcMap) -> Result<CdcMap> {
        h.then(&self.standardized())
    }

    pub fn add(&self, g: &CdcMap) -> Result<CdcMap> {
        if g.ctx != self.ctx || g.coarity() != self.coarity() {
            return Err(Error::ArityMismatch("sum of maps with different shapes".into()));
        }
        let components = self.components.iter().zip(&g.components).map(|(a, b)| a.try_add(b)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CdcMap { name: format!("{}+{}", self.name, g.name), domain: self.domain, ctx: self.ctx.clone(), components })
    }

    /// Every component is a linear form.
    pub fn is_linear(&self) -> bool {
        self.components.iter().all(Polynomial::is_homogeneous_linear)
    }

    /// Coefficient matrix of a linear map.
    pub fn matrix(&self) -> Option<Vec<Vec<Coeff>>> {
        if !self.is_linear() {
            return None;
        }
        let n = self.arity();
        Some(
            self.components
                .iter()
                .map(|c| (0..n).map(|i| c.coefficient(&crate::polycore::Monomial::var(n, i, 1))).collect())
                .collect(),
        )
    }

    pub fn eval(&self, point: &[Coeff]) -> Result<Vec<Coeff>> {
        Ok(self.components.iter().map(|c| c.eval(point)).collect::<std::result::Result<Vec<_>, _>>()?)
    }
}

/// `D[f](x, v) = Σ_i ∂f/∂x_i(x) v_i`, a map `2n → m`.
pub fn differential(f: &CdcMap) -> Result<CdcMap> {
    let n = f.arity();
    let ctx = standard_context(2 * n);
    let domain = f.domain;
    let lift: Vec<usize> = (0..n).collect();
    let components = f
        .components
        .iter()
        .map(|c| {
            let mut d = Polynomial::zero(&ctx, domain);
            for i in 0..n {
                let partial = c.formal_partial(i)?.remap(&ctx, &lift);
                d = &d + &(&partial * &Polynomial::var(&ctx, domain, n + i));
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CdcMap { name: format!("D[{}]", f.name), domain, ctx, components })
}

/// `Tf = ⟨f∘π₀, D[f]⟩ : 2n → 2m`.
pub fn tangent(f: &CdcMap) -> Result<CdcMap> {
    let n = f.arity();
    let base = f.then_inputs(&CdcMap::projection(f.domain, 2 * n, 0..n))?;
    Ok(base.pair(&differential(f)?)?.with_name(format!("T{}", f.name)))
}

/// `θ_f = ⟨π₀, D[f]⟩ : 2n → n + m`.
pub fn theta(f: &CdcMap) -> Result<CdcMap> {
    let n = f.arity();
    Ok(CdcMap::projection(f.domain, 2 * n, 0..n).pair(&differential(f)?)?.with_name(format!("θ_{}", f.name)))
}

/// Structure maps of `T X = X × X` at arity `n`; `T²X` has coordinates `(x, v, u, w)`.
#[derive(Clone, Debug)]
pub struct CdcStructure {
    pub n: usize,
    /// `p(x, v) = x`.
    pub p: CdcMap,
    /// `0(x) = (x, 0)`.
    pub zero: CdcMap,
    /// `+(x, v, w) = (x, v + w)` on `T₂X`.
    pub add: CdcMap,
    /// `ℓ(x, v) = (x, 0, 0, v)`.
    pub lift: CdcMap,
    /// `c(x, v, u, w) = (x, u, v, w)`.
    pub flip: CdcMap,
}

impl CdcStructure {
    pub fn new(domain: CoefficientDomain, n: usize) -> Result<Self> {
        let ctx2 = standard_context(2 * n);
        let ctx3 = standard_context(3 * n);
        let ctx1 = standard_context(n);
        let x = |ctx: &Arc<VariableContext>, i: usize| Polynomial::var(ctx, domain, i);
        let p = CdcMap::projection(domain, 2 * n, 0..n).with_name("p");
        let mut zc: Vec<Polynomial> = (0..n).map(|i| x(&ctx1, i)).collect();
        zc.extend(vec![Polynomial::zero(&ctx1, domain); n]);
        let zero = CdcMap::new("0", domain, ctx1, zc)?;
        let mut ac: Vec<Polynomial> = (0..n).map(|i| x(&ctx3, i)).collect();
        ac.extend((0..n).map(|i| &x(&ctx3, n + i) + &x(&ctx3, 2 * n + i)));
        let add = CdcMap::new("+", domain, ctx3, ac)?;
        let mut lc: Vec<Polynomial> = (0..n).map(|i| x(&ctx2, i)).collect();
        lc.extend(vec![Polynomial::zero(&ctx2, domain); 2 * n]);
        lc.extend((0..n).map(|i| x(&ctx2, n + i)));
        let lift = CdcMap::new("ℓ", domain, ctx2, lc)?;
        let flip = CdcMap::projection(domain, 4 * n, (0..n).chain(2 * n..3 * n).chain(n..2 * n).chain(3 * n..4 * n)).with_name("c");
        let s = CdcStructure { n, p, zero, add, lift, flip };
        if s.zero.then(&s.p)? != CdcMap::identity(domain, n) || s.flip.then(&s.flip)? != CdcMap::identity(domain, 4 * n) {
            return Err(Error::InconsistentClassification("structure maps violate p∘0 = id or c∘c = id".into()));
        }
        Ok(s)
    }
}

/// One checked polynomial identity.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// Componentwise `lhs - rhs`, shown when nonzero.
    pub residual: Vec<String>,
    /// Randomized corroboration, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn check(&mut self, name: &str, lhs: &CdcMap, rhs: &CdcMap, oracle: Option<&OracleConfig>) -> Result<()> {
        let (lhs, rhs) = (lhs.standardized(), rhs.standardized());
        if lhs.arity() != rhs.arity() || lhs.coarity() != rhs.coarity() {
            return Err(Error::ArityMismatch(format!("{name}: sides have shapes {}→{} and {}→{}", lhs.arity(), lhs.coarity(), rhs.arity(), rhs.coarity())));
        }
        let diffs: Vec<Polynomial> = lhs.components.iter().zip(&rhs.components).map(|(a, b)| a.try_sub(b)).collect::<std::result::Result<_, _>>()?;
        let holds = diffs.iter().all(Polynomial::is_zero);
        let oracle = match oracle {
            None => None,
            Some(cfg) => {
                let mut all = true;
                for (a, b) in lhs.components.iter().zip(&rhs.components) {
                    if identity_check(a, b, cfg)? == OracleVerdict::DefinitelyUnequal {
                        all = false;
                    }
                }
                if all != holds {
                    return Err(Error::EvidenceMismatch(format!("{name}: symbolic and randomized checks disagree")));
                }
                Some(if all { "probably equal".into() } else { "definitely unequal".into() })
            }
        };
        self.checks.push(IdentityCheck {
            name: name.into(),
            holds,
            residual: if holds { vec![] } else { diffs.iter().map(|d| d.to_string()).collect() },
            oracle,
        });
        Ok(())
    }
}

fn needs_negation(domain: CoefficientDomain) -> Result<()> {
    if domain.has_negation() {
        Ok(())
    } else {
        Err(Error::UnsupportedDomain(domain))
    }
}

/// The seven axioms of a Cartesian differential category instantiated at
/// `f: n → m` and `g: m → k`.
pub fn verify_cdc_axioms(f: &CdcMap, g: &CdcMap, oracle: Option<&OracleConfig>) -> Result<IdentityReport> {
    needs_negation(f.domain)?;
    if g.arity() != f.coarity() {
        return Err(Error::ArityMismatch(format!("g must start at arity {}, got {}", f.coarity(), g.arity())));
    }
    let d = f.domain;
    let n = f.arity();
    let m = f.coarity();
    let mut rep = IdentityReport { checks: vec![] };
    let df = differential(f)?;

    // CD1: D[f + h] = D[f] + D[h], D[0] = 0
    let h = f.then(g)?.then(&CdcMap::zero_map(d, g.coarity(), m))?.add(f)?;
    rep.check("CD1 additivity of D", &differential(&f.add(&h)?)?, &df.add(&differential(&h)?)?, oracle)?;
    rep.check("CD1 D[0] = 0", &differential(&CdcMap::zero_map(d, n, m))?, &CdcMap::zero_map(d, 2 * n, m), oracle)?;

    // CD2: D[f](x, v + w) = D[f](x, v) + D[f](x, w), D[f](x, 0) = 0
    let xvw = |b: usize| CdcMap::projection(d, 3 * n, (0..n).chain(b..b + n));
    let sum = CdcStructure::new(d, n)?.add;
    rep.check("CD2 additivity in the vector", &df.then_inputs(&sum)?, &df.then_inputs(&xvw(n))?.add(&df.then_inputs(&xvw(2 * n))?)?, oracle)?;
    let zero = CdcStructure::new(d, n)?.zero;
    rep.check("CD2 D[f](x, 0) = 0", &df.then_inputs(&zero)?, &CdcMap::zero_map(d, n, m), oracle)?;

    // CD3: D[id] = π₁, D[π_i] = π_i ∘ π₁
    rep.check("CD3 D[id] = π₁", &differential(&CdcMap::identity(d, n))?, &CdcMap::projection(d, 2 * n, n..2 * n), oracle)?;
    for i in 0..n {
        rep.check(
            &format!("CD3 D[π{}] = π{}∘π₁", i + 1, i + 1),
            &differential(&CdcMap::projection(d, n, [i]))?,
            &CdcMap::projection(d, 2 * n, [n + i]),
            oracle,
        )?;
    }

    // CD4: D[⟨f, g∘f⟩] = ⟨D[f], D[g∘f]⟩
    let gf = f.then(g)?;
    rep.check("CD4 D of a pairing", &differential(&f.pair(&gf)?)?, &df.pair(&differential(&gf)?)?, oracle)?;

    // CD5: D[g∘f] = D[g] ∘ ⟨f∘π₀, D[f]⟩
    rep.check("CD5 chain rule", &differential(&gf)?, &tangent(f)?.then(&differential(g)?)?, oracle)?;

    // CD6: D[D[f]]((x,0),(0,w)) = D[f](x,w)
    let ddf = differential(&df)?;
    let ctx2 = standard_context(2 * n);
    let mut ins: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(&ctx2, d, i)).collect();
    ins.extend(vec![Polynomial::zero(&ctx2, d); 2 * n]);
    ins.extend((0..n).map(|i| Polynomial::var(&ctx2, d, n + i)));
    let embed = CdcMap::new("ι", d, ctx2, ins)?;
    rep.check("CD6 linearity of D in the vector", &ddf.then_inputs(&embed)?, &df, oracle)?;

    // CD7: D[D[f]]((x,v),(u,0)) = D[D[f]]((x,u),(v,0))
    let ctx3 = standard_context(3 * n);
    let var3 = |i: usize| Polynomial::var(&ctx3, d, i);
    let mk = |a: usize, b: usize| -> Result<CdcMap> {
        let mut c: Vec<Polynomial> = (0..n).map(var3).collect();
        c.extend((0..n).map(|i| var3(a + i)));
        c.extend((0..n).map(|i| var3(b + i)));
        c.extend(vec![Polynomial::zero(&ctx3, d); n]);
        CdcMap::new("σ", d, ctx3.clone(), c)
    };
    rep.check("CD7 symmetry of second derivatives", &ddf.then_inputs(&mk(n, 2 * n)?)?, &ddf.then_inputs(&mk(2 * n, n)?)?, oracle)?;
    Ok(rep)
}

/// Tangent-structure laws at arity `n`, naturality at `f`, and the θ laws for
/// `f: n → m`, `g: m → k`.
pub fn verify_tangent_identities(f: &CdcMap, g: &CdcMap, oracle: Option<&OracleConfig>) -> Result<IdentityReport> {
    let d = f.domain;
    let n = f.arity();
    let m = f.coarity();
    if g.arity() != m {
        return Err(Error::ArityMismatch(format!("g must start at arity {m}, got {}", g.arity())));
    }
    let sx = CdcStructure::new(d, n)?;
    let sy = CdcStructure::new(d, m)?;
    let mut rep = IdentityReport { checks: vec![] };
    rep.check("c∘c = id", &sx.flip.then(&sx.flip)?, &CdcMap::identity(d, 4 * n), oracle)?;
    rep.check("p∘0 = id", &sx.zero.then(&sx.p)?, &CdcMap::identity(d, n), oracle)?;
    let zero_t = CdcStructure::new(d, 2 * n)?.zero;
    rep.check("ℓ∘0 = 0_T∘0", &sx.zero.then(&sx.lift)?, &sx.zero.then(&zero_t)?, oracle)?;
    rep.check("ℓ∘0 = T(0)∘0", &sx.zero.then(&sx.lift)?, &sx.zero.then(&tangent(&sx.zero)?)?, oracle)?;
    rep.check("c∘ℓ = ℓ", &sx.lift.then(&sx.flip)?, &sx.lift, oracle)?;
    rep.check("p∘ℓ = 0∘p", &sx.lift.then(&CdcStructure::new(d, 2 * n)?.p)?, &sx.p.then(&sx.zero)?, oracle)?;

    let tf = tangent(f)?;
    let ttf = tangent(&tf)?;
    rep.check("naturality of p", &tf.then(&sy.p)?, &sx.p.then(f)?, oracle)?;
    rep.check("naturality of 0", &sx.zero.then(&tf)?, &f.then(&sy.zero)?, oracle)?;
    rep.check("naturality of c", &sx.flip.then(&ttf)?, &ttf.then(&sy.flip)?, oracle)?;
    rep.check("naturality of ℓ", &sx.lift.then(&ttf)?, &tf.then(&sy.lift)?, oracle)?;
    rep.check("θ_id = id", &theta(&CdcMap::identity(d, n))?, &CdcMap::identity(d, 2 * n), oracle)?;

    // θ_{g∘f} = γ ∘ (id × θ_g) ∘ θ_f with (x, w) ↦ (x, f(x), D[g](f(x), w)) ↦ (x, D[g](f(x), w))
    let k = g.coarity();
    let ctx = standard_context(n + m);
    let xs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(&ctx, d, i)).collect();
    let fx: Vec<Polynomial> = f.components.iter().map(|c| c.remap(&ctx, &(0..n).collect::<Vec<_>>())).collect();
    let ws: Vec<Polynomial> = (0..m).map(|j| Polynomial::var(&ctx, d, n + j)).collect();
    let mut point_and_vector = fx.clone();
    point_and_vector.extend(ws);
    let dg = differential(g)?;
    let dgw = dg.components.iter().map(|c| c.substitute_into(&point_and_vector, &ctx, d)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut triple = xs.clone();
    triple.extend(fx);
    triple.extend(dgw);
    let id_theta_g = CdcMap::new("id×θ_g", d, ctx, triple)?;
    let gamma = CdcMap::projection(d, n + m + k, (0..n).chain(n + m..n + m + k));
    let composite = theta(f)?.then(&id_theta_g)?.then(&gamma)?;
    rep.check("θ-composition law", &theta(&f.then(g)?)?, &composite, oracle)?;

    // θ_{Tf} ∘ c = c̃ ∘ Tθ_f with c̃ shuffling blocks (n, m, n, m)
    let c_tilde = CdcMap::projection(d, 2 * (n + m), (0..n).chain(n + m..2 * n + m).chain(n..n + m).chain(2 * n + m..2 * (n + m)));
    rep.check("θ-flip law", &sx.flip.then(&theta(&tf)?)?, &tangent(&theta(f)?)?.then(&c_tilde)?, oracle)?;
    Ok(rep)
}

/// Turns a section `s` of `θ_f` into a linear one: zero-adjust, then keep the
/// part linear in the fibre variables.
pub fn linearize_section(f: &CdcMap, s: &CdcMap) -> Result<CdcMap> {
    needs_negation(f.domain)?;
    let n = f.arity();
    let m = f.coarity();
    if s.arity() != n + m || s.coarity() != 2 * n {
        return Err(Error::NotASection(format!("expected a map {} → {}, got {} → {}", n + m, 2 * n, s.arity(), s.coarity())));
    }
    let th = theta(f)?;
    let id = CdcMap::identity(f.domain, n + m);
    if s.standardized().then(&th)? != id {
        return Err(Error::NotASection(format!("θ_{}∘{} is not the identity", f.name, s.name)));
    }
    let ctx = s.ctx.clone();
    let d = f.domain;
    let at_zero: Vec<Polynomial> = (0..n + m).map(|i| if i < n { Polynomial::var(&ctx, d, i) } else { Polynomial::zero(&ctx, d) }).collect();
    let mut out: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(&ctx, d, i)).collect();
    for c in &s.components[n..] {
        let shifted = c.try_sub(&c.substitute_into(&at_zero, &ctx, d)?)?;
        let mut lin = Polynomial::zero(&ctx, d);
        for j in 0..m {
            let coeff = shifted.formal_partial(n + j)?.substitute_into(&at_zero, &ctx, d)?;
            lin = &lin + &(&coeff * &Polynomial::var(&ctx, d, n + j));
        }
        out.push(lin);
    }
    let sf = CdcMap::new(format!("{}_lin", s.name), d, ctx, out)?;
    if sf.standardized().then(&th)? != id {
        return Err(Error::InconsistentClassification("linearized section fails θ_f∘s = id".into()));
    }
    if !is_linear_in_fibre(&sf, n) {
        return Err(Error::InconsistentClassification("linearized section is not linear in the fibre".into()));
    }
    Ok(sf)
}

/// Fibre components have degree exactly one in the last variables.
pub fn is_linear_in_fibre(s: &CdcMap, n: usize) -> bool {
    s.components[n..].iter().all(|c| c.terms().all(|(mono, _)| mono.exponents()[n..].iter().sum::<u32>() == 1))
}

/// Map with small integer coefficients and total degree at most `max_degree`.
pub fn random_map(rng: &mut impl rand::Rng, domain: CoefficientDomain, n: usize, m: usize, max_degree: u32, max_terms: usize) -> CdcMap {
    let ctx = standard_context(n);
    let lo = if domain.has_negation() { -5 } else { 0 };
    let components = (0..m)
        .map(|_| {
            let terms: Vec<_> = (0..rng.gen_range(1..=max_terms.max(1)))
                .map(|_| {
                    let budget = rng.gen_range(0..=max_degree);
                    let mut exps = vec![0u32; n];
                    for _ in 0..budget {
                        exps[rng.gen_range(0..n)] += 1;
                    }
                    (crate::polycore::Monomial::from_exponents(exps), domain.from_i64(rng.gen_range(lo..=5)))
                })
                .collect();
            Polynomial::from_terms(&ctx, domain, terms)
        })
        .collect();
    CdcMap { name: "random".into(), domain, ctx, components }
}

#[cfg(test)]
mod tests;
