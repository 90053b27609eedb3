use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{Coeff, CoefficientDomain, Monomial, PolyError, TermOrder, VariableContext};

/// Exact multivariate polynomial. Terms are keyed by monomial in grevlex order
/// and never hold a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Arc<VariableContext>,
    domain: CoefficientDomain,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VariableContext>, domain: CoefficientDomain) -> Self {
        Polynomial { ctx: ctx.clone(), domain, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<VariableContext>, domain: CoefficientDomain, c: Coeff) -> Self {
        Self::from_terms(ctx, domain, [(Monomial::one(ctx.len()), c)])
    }

    pub fn from_int(ctx: &Arc<VariableContext>, domain: CoefficientDomain, c: i64) -> Self {
        Self::constant(ctx, domain, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn one(ctx: &Arc<VariableContext>, domain: CoefficientDomain) -> Self {
        Self::from_int(ctx, domain, 1)
    }

    pub fn var(ctx: &Arc<VariableContext>, domain: CoefficientDomain, i: usize) -> Self {
        Self::from_terms(ctx, domain, [(Monomial::var(ctx.len(), i, 1), Coeff::one())])
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, combining repeats
    /// and normalizing coefficients into the domain.
    pub fn from_terms(
        ctx: &Arc<VariableContext>,
        domain: CoefficientDomain,
        terms: impl IntoIterator<Item = (Monomial, Coeff)>,
    ) -> Self {
        let mut p = Polynomial::zero(ctx, domain);
        for (m, c) in terms {
            assert_eq!(m.len(), ctx.len(), "monomial arity does not match context");
            p.add_term(m, domain.normalize(c));
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let domain = self.domain;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = domain.add(o.get(), &c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn nvars(&self) -> usize {
        self.ctx.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map_or(false, |(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&Monomial::one(self.nvars())).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[i]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.degree_in(i) > 0
    }

    /// Leading monomial and coefficient under `order`.
    pub fn leading_term(&self, order: TermOrder) -> Option<(&Monomial, &Coeff)> {
        match order {
            TermOrder::GrevLex => self.terms.iter().next_back(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ctx != other.ctx {
            return Err(PolyError::ContextMismatch);
        }
        if self.domain != other.domain {
            return Err(PolyError::DomainMismatch(self.domain, other.domain));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_neg(&self) -> Result<Polynomial, PolyError> {
        if !self.domain.has_negation() && !self.is_zero() {
            return Err(PolyError::NegationUnsupported);
        }
        let mut r = Polynomial::zero(&self.ctx, self.domain);
        for (m, c) in &self.terms {
            r.terms.insert(m.clone(), self.domain.neg(c).expect("negation"));
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        self.try_add(&other.try_neg()?)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut r = Polynomial::zero(&self.ctx, self.domain);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), self.domain.mul(ca, cb));
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        let c = self.domain.normalize(c.clone());
        let mut r = Polynomial::zero(&self.ctx, self.domain);
        if c.is_zero() {
            return r;
        }
        for (m, a) in &self.terms {
            r.add_term(m.clone(), self.domain.mul(a, &c));
        }
        r
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Coeff) -> Polynomial {
        let mut r = Polynomial::zero(&self.ctx, self.domain);
        for (m, a) in &self.terms {
            r.add_term(m.mul(mono), self.domain.mul(a, c));
        }
        r
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::one(&self.ctx, self.domain);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Exact evaluation at a point of domain elements.
    pub fn eval(&self, point: &[Coeff]) -> Result<Coeff, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        let d = self.domain;
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = d.mul(&t, x);
                }
            }
            acc = d.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn formal_partial(&self, i: usize) -> Result<Polynomial, PolyError> {
        if i >= self.nvars() {
            return Err(PolyError::IndexOutOfRange(i, self.nvars()));
        }
        let mut r = Polynomial::zero(&self.ctx, self.domain);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.exponents().to_vec();
            ex[i] -= 1;
            let k = BigRational::from_integer(BigInt::from(e));
            r.add_term(Monomial::from_exponents(ex), self.domain.normalize(c * k));
        }
        Ok(r)
    }

    /// Substitutes `images[i]` for variable `i`. All images share a context,
    /// which becomes the context of the result.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.nvars(), got: images.len() });
        }
        let Some(first) = images.first() else {
            // no variables: only a constant to transport, but we lack a target context
            return Err(PolyError::ArityMismatch { expected: 1, got: 0 });
        };
        self.substitute_into(images, first.ctx(), first.domain())
    }

    /// Like [`substitute`](Self::substitute) but with an explicit target context,
    /// which also covers the case of no variables.
    pub fn substitute_into(
        &self,
        images: &[Polynomial],
        ctx: &Arc<VariableContext>,
        domain: CoefficientDomain,
    ) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.nvars(), got: images.len() });
        }
        for im in images {
            if im.ctx() != ctx {
                return Err(PolyError::ContextMismatch);
            }
            if im.domain() != domain {
                return Err(PolyError::DomainMismatch(im.domain(), domain));
            }
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(ctx, domain), p.clone()]).collect();
        let mut r = Polynomial::zero(ctx, domain);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(ctx, domain, domain.try_normalize(c.clone())?);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            r = &r + &t;
        }
        Ok(r)
    }

    /// Transports into `ctx`, sending variable `i` to variable `index_map[i]`.
    pub fn remap(&self, ctx: &Arc<VariableContext>, index_map: &[usize]) -> Polynomial {
        assert_eq!(index_map.len(), self.nvars());
        let mut r = Polynomial::zero(ctx, self.domain);
        for (m, c) in &self.terms {
            let mut ex = vec![0; ctx.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                ex[index_map[i]] += e;
            }
            r.add_term(Monomial::from_exponents(ex), c.clone());
        }
        r
    }

    /// Reinterprets the coefficients in another domain (e.g. integers as rationals).
    pub fn with_domain(&self, domain: CoefficientDomain) -> Result<Polynomial, PolyError> {
        let mut r = Polynomial::zero(&self.ctx, domain);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), domain.try_normalize(c.clone())?);
        }
        Ok(r)
    }

    /// True when every term has total degree exactly one.
    pub fn is_homogeneous_linear(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 1)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = format_monomial(m, self.ctx.names());
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.try_neg().expect("polynomial negation")
    }
}

pub fn poly_add(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    p.try_add(q)
}

pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    p.try_mul(q)
}

pub fn poly_eval(p: &Polynomial, point: &[Coeff]) -> Result<Coeff, PolyError> {
    p.eval(point)
}

pub fn formal_partial(p: &Polynomial, i: usize) -> Result<Polynomial, PolyError> {
    p.formal_partial(i)
}
