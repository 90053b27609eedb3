//! Kernels, preimages and lifts computed by elimination, with a linear-algebra
//! path for finite-dimensional targets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{buchberger, module_buchberger, GroebnerBasis, GroebnerError, Limits};
use crate::presentations::AlgebraMorphism;
use crate::polycore::{Coeff, CoefficientDomain, Monomial, Polynomial, TermOrder, VariableContext};

fn zero_vec(ctx: &Arc<VariableContext>, domain: CoefficientDomain, n: usize) -> Vec<Polynomial> {
    vec![Polynomial::zero(ctx, domain); n]
}

/// Builds `{(M col_i, e_i)} ∪ {(l, 0)} ∪ {(g e_j, 0)}` in rank `r + s`.
fn graph_generators(
    ctx: &Arc<VariableContext>,
    domain: CoefficientDomain,
    ideal: &[Polynomial],
    columns: &[Vec<Polynomial>],
    relations: &[Vec<Polynomial>],
    r: usize,
) -> Result<Vec<Vec<Polynomial>>, GroebnerError> {
    let s = columns.len();
    let mut gens = Vec::new();
    for (i, col) in columns.iter().enumerate() {
        if col.len() != r {
            return Err(GroebnerError::RankMismatch(col.len(), r));
        }
        let mut v = col.clone();
        v.extend(zero_vec(ctx, domain, s));
        v[r + i] = Polynomial::one(ctx, domain);
        gens.push(v);
    }
    for l in relations {
        if l.len() != r {
            return Err(GroebnerError::RankMismatch(l.len(), r));
        }
        let mut v = l.clone();
        v.extend(zero_vec(ctx, domain, s));
        gens.push(v);
    }
    for g in ideal {
        for j in 0..r {
            let mut v = zero_vec(ctx, domain, r + s);
            v[j] = g.clone();
            gens.push(v);
        }
    }
    Ok(gens)
}

/// Generators of `{x ∈ A^s : Σ x_i columns[i] ∈ L + I·A^r}` where `A = k[ctx]/I`,
/// reduced modulo `I` with zero vectors dropped.
pub fn preimage_of_submodule(
    ctx: &Arc<VariableContext>,
    domain: CoefficientDomain,
    ideal: &[Polynomial],
    columns: &[Vec<Polynomial>],
    relations: &[Vec<Polynomial>],
    limits: &Limits,
) -> Result<Vec<Vec<Polynomial>>, GroebnerError> {
    let r = columns.first().or(relations.first()).map_or(0, Vec::len);
    let s = columns.len();
    if s == 0 {
        return Ok(vec![]);
    }
    let gens = graph_generators(ctx, domain, ideal, columns, relations, r)?;
    let mgb = module_buchberger(ctx, domain, r + s, &gens, TermOrder::GrevLex, limits)?;
    let igb = buchberger(ctx, domain, ideal, TermOrder::GrevLex, limits)?;
    let mut out: Vec<Vec<Polynomial>> = Vec::new();
    for g in mgb.generators() {
        if g[..r].iter().all(Polynomial::is_zero) {
            let x = g[r..].iter().map(|p| igb.normal_form(p)).collect::<Result<Vec<_>, _>>()?;
            if x.iter().any(|p| !p.is_zero()) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Some `x ∈ A^s` with `Σ x_i columns[i] ≡ rhs` modulo `L + I·A^r`, if one exists.
/// `r` is taken from `rhs`.
pub fn solve_lift(
    ctx: &Arc<VariableContext>,
    domain: CoefficientDomain,
    ideal: &[Polynomial],
    columns: &[Vec<Polynomial>],
    rhs: &[Polynomial],
    relations: &[Vec<Polynomial>],
    limits: &Limits,
) -> Result<Option<Vec<Polynomial>>, GroebnerError> {
    let r = rhs.len();
    let s = columns.len();
    let gens = graph_generators(ctx, domain, ideal, columns, relations, r)?;
    let mgb = module_buchberger(ctx, domain, r + s, &gens, TermOrder::GrevLex, limits)?;
    let mut b = rhs.to_vec();
    b.extend(zero_vec(ctx, domain, s));
    let nf = mgb.normal_form(&b)?;
    if !nf[..r].iter().all(Polynomial::is_zero) {
        return Ok(None);
    }
    let igb = buchberger(ctx, domain, ideal, TermOrder::GrevLex, limits)?;
    let x = nf[r..].iter().map(|w| igb.normal_form(&-w)).collect::<Result<Vec<_>, _>>()?;
    Ok(Some(x))
}

/// Context `target vars ++ source vars` (source names primed on clash).
fn graph_context(f: &AlgebraMorphism) -> Arc<VariableContext> {
    let t = f.target().ctx();
    let mut names: Vec<String> = t.names().to_vec();
    for v in f.source().ctx().names() {
        let mut n = v.clone();
        while names.contains(&n) {
            n.push('\'');
        }
        names.push(n);
    }
    let m = t.len();
    let n = names.len() - m;
    Arc::new(VariableContext::with_blocks(names, vec![m, n]).expect("distinct names"))
}

/// Gröbner basis of `I_B(y) + (x_i - f(x_i))` eliminating the target block first.
pub fn graph_ideal(f: &AlgebraMorphism, limits: &Limits) -> Result<GroebnerBasis, GroebnerError> {
    let ctx = graph_context(f);
    let domain = f.source().domain();
    let m = f.target().ctx().len();
    let n = f.source().ctx().len();
    let to_graph: Vec<usize> = (0..m).collect();
    let mut gens: Vec<Polynomial> = f.target().ideal().iter().map(|g| g.remap(&ctx, &to_graph)).collect();
    for (i, im) in f.full_images().iter().enumerate() {
        let x = Polynomial::var(&ctx, domain, m + i);
        gens.push(&x - &im.remap(&ctx, &to_graph));
    }
    let order = if m == 0 || n == 0 { TermOrder::GrevLex } else { TermOrder::BlockElimination(m) };
    buchberger(&ctx, domain, &gens, order, limits)
}

fn core_err(e: crate::error::Error) -> GroebnerError {
    match e {
        crate::error::Error::Groebner(g) => g,
        other => GroebnerError::ResourceLimit(other.to_string()),
    }
}

/// Image of `f` when the target is finite-dimensional: an echelon basis of the
/// image (target normal forms, each with a source preimage) and the reduced
/// grevlex basis of the kernel in the free polynomial ring on the source variables.
pub(crate) struct FdImage {
    /// Keyed by leading monomial; values are (monic image, preimage).
    rows: BTreeMap<Monomial, (Polynomial, Polynomial)>,
    pub kernel: Vec<Polynomial>,
}

impl FdImage {
    /// `(remainder, combination)` with `v = Σ rows + remainder`, the rows' preimages
    /// summed into `combination`.
    fn reduce(&self, v: &Polynomial, source_zero: &Polynomial) -> (Polynomial, Polynomial) {
        let mut v = v.clone();
        let mut combo = source_zero.clone();
        let mut cursor: Option<Monomial> = None;
        loop {
            let next = v
                .terms()
                .rev()
                .map(|(m, c)| (m.clone(), c.clone()))
                .find(|(m, _)| cursor.as_ref().map_or(true, |cur| m < cur) && self.rows.contains_key(m));
            let Some((m, c)) = next else { break };
            let (row, pre) = &self.rows[&m];
            v = &v - &row.scale(&c);
            combo = &combo + &pre.scale(&c);
            cursor = Some(m);
        }
        (v, combo)
    }

    /// A source preimage of `y`, if `y` is in the image.
    pub fn preimage(&self, y: &Polynomial, source_zero: &Polynomial) -> Result<Polynomial, Polynomial> {
        let (r, combo) = self.reduce(y, source_zero);
        if r.is_zero() {
            Ok(combo)
        } else {
            Err(r)
        }
    }
}

/// Runs the monomial walk of Buchberger–Möller; `None` if the target is infinite-dimensional.
pub(crate) fn fd_image(f: &AlgebraMorphism, limits: &Limits) -> Result<Option<FdImage>, GroebnerError> {
    let tgb = f.target().gb(limits).map_err(core_err)?;
    let tn = f.target().ctx().len();
    let leads = tgb.leading_monomials();
    let finite = leads.iter().any(Monomial::is_one)
        || (0..tn).all(|i| leads.iter().any(|m| m.pure_power().map(|(j, _)| j) == Some(i)));
    if !finite {
        return Ok(None);
    }
    let domain = f.source().domain();
    let sctx = f.source().ctx();
    let n = sctx.len();
    let images = f.full_images();
    let source_zero = Polynomial::zero(sctx, domain);
    let mut out = FdImage { rows: BTreeMap::new(), kernel: Vec::new() };
    let mut kernel_leads: Vec<Monomial> = Vec::new();
    let mut standard: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    let mut queue: BTreeSet<Monomial> = BTreeSet::from([Monomial::one(n)]);
    while let Some(t) = queue.pop_first() {
        if kernel_leads.iter().any(|l| l.divides(&t)) || standard.contains_key(&t) {
            continue;
        }
        if standard.len() > limits.max_basis {
            return Err(GroebnerError::ResourceLimit(format!("image has more than {} basis elements", limits.max_basis)));
        }
        let value = match (0..n).find(|&i| t.exponents()[i] > 0) {
            None => tgb.normal_form(&Polynomial::one(tgb.ctx(), domain))?,
            Some(i) => {
                let mut e = t.exponents().to_vec();
                e[i] -= 1;
                let parent = &standard[&Monomial::from_exponents(e)];
                tgb.normal_form(&(&images[i] * parent))?
            }
        };
        let mono = Polynomial::from_terms(sctx, domain, [(t.clone(), Coeff::from_integer(1.into()))]);
        let (rem, combo) = out.reduce(&value, &source_zero);
        if rem.is_zero() {
            out.kernel.push(&mono - &combo);
            kernel_leads.push(t);
            continue;
        }
        let (lead, lc) = rem.leading_term(TermOrder::GrevLex).map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");
        let inv = domain.inv(&lc).expect("field coefficients");
        out.rows.insert(lead, (rem.scale(&inv), (&mono - &combo).scale(&inv)));
        standard.insert(t.clone(), value);
        for j in 0..n {
            queue.insert(t.mul(&Monomial::var(n, j, 1)));
        }
    }
    Ok(Some(out))
}

/// Nonzero generators of `Ker f`, reduced in the source.
pub fn ring_map_kernel(f: &AlgebraMorphism, limits: &Limits) -> Result<Vec<Polynomial>, GroebnerError> {
    if f.source().domain().is_field() {
        if let Some(img) = fd_image(f, limits)? {
            let sgb = f.source().gb(limits).map_err(core_err)?;
            let mut out: Vec<Polynomial> = Vec::new();
            for g in img.kernel {
                let k = sgb.normal_form(&g)?;
                if !k.is_zero() && !out.contains(&k) {
                    out.push(k);
                }
            }
            return Ok(out);
        }
    }
    kernel_by_elimination(f, limits)
}

/// Kernel from the graph ideal with the target variables eliminated.
pub(crate) fn kernel_by_elimination(f: &AlgebraMorphism, limits: &Limits) -> Result<Vec<Polynomial>, GroebnerError> {
    let gb = graph_ideal(f, limits)?;
    let m = f.target().ctx().len();
    let n = f.source().ctx().len();
    let back: Vec<usize> = (0..m + n).map(|i| i.saturating_sub(m)).collect();
    let sgb = f.source().gb(limits).map_err(core_err)?;
    let mut out: Vec<Polynomial> = Vec::new();
    for g in gb.generators() {
        if (0..m).any(|i| g.uses_var(i)) {
            continue;
        }
        let k = sgb.normal_form(&g.remap(f.source().ctx(), &back))?;
        if !k.is_zero() && !out.contains(&k) {
            out.push(k);
        }
    }
    Ok(out)
}
