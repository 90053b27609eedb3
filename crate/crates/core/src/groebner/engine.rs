//! Buchberger's algorithm over free modules `k[x]^r` with a position-over-term
//! order. Ideals are the rank-one case.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::{GroebnerError, Limits};
use crate::polycore::{Coeff, CoefficientDomain, Monomial, TermOrder};

/// Coefficient arithmetic the engine needs.
pub(crate) trait Field {
    type C: Clone + PartialEq + std::fmt::Debug;
    fn supported(&self) -> Result<(), GroebnerError>;
    fn add(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn inv(&self, a: &Self::C) -> Self::C;
    fn is_zero(&self, a: &Self::C) -> bool;
    fn one(&self) -> Self::C;
    fn is_one(&self, a: &Self::C) -> bool {
        *a == self.one()
    }
}

/// Exact rational-backed coefficients of a `CoefficientDomain`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Exact(pub CoefficientDomain);

impl Field for Exact {
    type C = Coeff;

    fn supported(&self) -> Result<(), GroebnerError> {
        if self.0.is_field() {
            Ok(())
        } else {
            Err(GroebnerError::UnsupportedDomain(self.0))
        }
    }
    fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.0.add(a, b)
    }
    fn neg(&self, a: &Coeff) -> Coeff {
        self.0.neg(a).expect("field coefficients")
    }
    fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.0.mul(a, b)
    }
    fn inv(&self, a: &Coeff) -> Coeff {
        self.0.inv(a).expect("nonzero in a field")
    }
    fn is_zero(&self, a: &Coeff) -> bool {
        a.is_zero()
    }
    fn one(&self) -> Coeff {
        Coeff::one()
    }
    fn is_one(&self, a: &Coeff) -> bool {
        a.is_one()
    }
}

/// `F_p` with machine-word residues; `p < 2^63`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp(pub u64);

impl Field for Fp {
    type C = u64;

    fn supported(&self) -> Result<(), GroebnerError> {
        Ok(())
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat
        let (mut base, mut e, mut acc) = (*a, self.0 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn one(&self) -> u64 {
        1
    }
}

/// A module element as terms `(position, monomial, coefficient)` sorted
/// ascending in the module order, so the leading term is last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MVec<C = Coeff> {
    pub terms: Vec<(usize, Monomial, C)>,
}

impl<C> MVec<C> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(usize, Monomial, C)> {
        self.terms.last()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1.degree()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Monomial,
    sugar: u32,
}

struct PairState<C> {
    basis: Vec<MVec<C>>,
    /// Leading term not divisible by a later element's: eligible for pairs and reduction.
    active: Vec<bool>,
    /// Sugar degree of each basis element.
    sugar: Vec<u32>,
    pairs: Vec<Pair>,
}

impl<C> PairState<C> {
    fn reducers(&self) -> Vec<&MVec<C>> {
        self.basis.iter().zip(&self.active).filter(|(_, a)| **a).map(|(g, _)| g).collect()
    }
}

pub(crate) struct Engine<F = Exact> {
    pub order: TermOrder,
    pub field: F,
    pub limits: Limits,
    pub rank: usize,
}

impl Engine<Exact> {
    pub fn exact(order: TermOrder, domain: CoefficientDomain, limits: Limits, rank: usize) -> Self {
        Engine { order, field: Exact(domain), limits, rank }
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.field.0
    }
}

impl<F: Field> Engine<F> {
    /// Position-over-term: a smaller position index is larger; ties use the monomial order.
    pub fn cmp(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        b.0.cmp(&a.0).then_with(|| self.order.cmp(a.1, b.1))
    }

    pub fn sort(&self, mut terms: Vec<(usize, Monomial, F::C)>) -> MVec<F::C> {
        terms.retain(|t| !self.field.is_zero(&t.2));
        terms.sort_by(|a, b| self.cmp((a.0, &a.1), (b.0, &b.1)));
        // merge equal keys
        let mut out: Vec<(usize, Monomial, F::C)> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == t.0 && last.1 == t.1 {
                    last.2 = self.field.add(&last.2, &t.2);
                    if self.field.is_zero(&last.2) {
                        out.pop();
                    }
                    continue;
                }
            }
            out.push(t);
        }
        MVec { terms: out }
    }

    /// `f - c * m * g`, merging two ascending term lists.
    pub fn sub_scaled(&self, f: &MVec<F::C>, c: &F::C, m: &Monomial, g: &MVec<F::C>) -> MVec<F::C> {
        let negc = self.field.neg(c);
        let scaled: Vec<(usize, Monomial, F::C)> = g
            .terms
            .iter()
            .map(|(p, mono, a)| (*p, mono.mul(m), self.field.mul(a, &negc)))
            .collect();
        let mut out = Vec::with_capacity(f.terms.len() + scaled.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < scaled.len() {
            let a = &f.terms[i];
            let b = &scaled[j];
            match self.cmp((a.0, &a.1), (b.0, &b.1)) {
                Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = self.field.add(&a.2, &b.2);
                    if !self.field.is_zero(&s) {
                        out.push((a.0, a.1.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f.terms[i..]);
        out.extend(scaled.into_iter().skip(j));
        MVec { terms: out }
    }

    pub fn make_monic(&self, mut f: MVec<F::C>) -> MVec<F::C> {
        if let Some(lc) = f.lead().map(|t| t.2.clone()) {
            if !self.field.is_one(&lc) {
                let inv = self.field.inv(&lc);
                for t in &mut f.terms {
                    t.2 = self.field.mul(&t.2, &inv);
                }
            }
        }
        f
    }

    /// Complete reduction of `f` modulo `basis` (all basis elements monic).
    pub fn normal_form(&self, f: &MVec<F::C>, basis: &[MVec<F::C>]) -> MVec<F::C> {
        self.normal_form_by(f, &basis.iter().collect::<Vec<_>>())
    }

    fn normal_form_by(&self, f: &MVec<F::C>, basis: &[&MVec<F::C>]) -> MVec<F::C> {
        let mut p = f.clone();
        let mut rem: Vec<(usize, Monomial, F::C)> = Vec::new();
        while let Some((pos, lm, lc)) = p.lead().cloned() {
            let divisor = basis.iter().find(|g| {
                let (gp, gm, _) = g.lead().expect("nonzero basis element");
                *gp == pos && gm.divides(&lm)
            });
            match divisor {
                Some(g) => {
                    let q = g.lead().unwrap().1.quotient_of(&lm);
                    p = self.sub_scaled(&p, &lc, &q, g);
                }
                None => {
                    rem.push(p.terms.pop().unwrap());
                }
            }
        }
        rem.reverse();
        MVec { terms: rem }
    }

    fn spoly(&self, f: &MVec<F::C>, g: &MVec<F::C>) -> MVec<F::C> {
        let (_, fm, _) = f.lead().unwrap();
        let (_, gm, _) = g.lead().unwrap();
        let l = fm.lcm(gm);
        let mf = fm.quotient_of(&l);
        let mg = gm.quotient_of(&l);
        let shifted = MVec { terms: f.terms.iter().map(|(p, m, c)| (*p, m.mul(&mf), c.clone())).collect() };
        self.sub_scaled(&shifted, &self.field.one(), &mg, g)
    }

    /// Reduced Gröbner basis of the submodule generated by `gens`.
    pub fn buchberger(&self, gens: Vec<MVec<F::C>>) -> Result<Vec<MVec<F::C>>, GroebnerError> {
        self.field.supported()?;
        let mut state = PairState { basis: Vec::new(), active: Vec::new(), sugar: Vec::new(), pairs: Vec::new() };
        let mut budget = self.limits.max_reductions;
        for g in gens {
            let g = self.normal_form_by(&g, &state.reducers());
            if g.is_zero() {
                continue;
            }
            let sugar = g.max_degree();
            self.add_to_basis(&mut state, g, sugar)?;
        }
        while !state.pairs.is_empty() {
            let (k, _) = state
                .pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    a.sugar.cmp(&b.sugar).then_with(|| a.lcm.degree().cmp(&b.lcm.degree())).then_with(|| self.order.cmp(&a.lcm, &b.lcm)).then((a.i, a.j).cmp(&(b.i, b.j)))
                })
                .expect("nonempty");
            let pair = state.pairs.swap_remove(k);
            let lcm_deg = pair.lcm.degree();
            if lcm_deg > self.limits.degree_cap {
                return Err(GroebnerError::ResourceLimit(format!(
                    "S-pair degree {lcm_deg} exceeds degree cap {}",
                    self.limits.degree_cap
                )));
            }
            if budget == 0 {
                return Err(GroebnerError::ResourceLimit("reduction budget exhausted".into()));
            }
            budget -= 1;
            let s = self.spoly(&state.basis[pair.i], &state.basis[pair.j]);
            let r = self.normal_form_by(&s, &state.reducers());
            if !r.is_zero() {
                self.add_to_basis(&mut state, r, pair.sugar)?;
            }
        }
        Ok(self.reduce_basis(state.basis))
    }

    /// Whether the monic, nonzero elements of `basis` already form a Gröbner basis.
    pub fn is_groebner(&self, basis: &[MVec<F::C>]) -> Result<bool, GroebnerError> {
        let mut state = PairState { basis: Vec::new(), active: Vec::new(), sugar: Vec::new(), pairs: Vec::new() };
        for g in basis {
            self.add_to_basis(&mut state, g.clone(), g.max_degree())?;
        }
        for pair in &state.pairs {
            let s = self.spoly(&state.basis[pair.i], &state.basis[pair.j]);
            if !self.normal_form_by(&s, &state.reducers()).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Adds `g` and updates the pair set with the Gebauer–Möller criteria.
    fn add_to_basis(&self, state: &mut PairState<F::C>, g: MVec<F::C>, sugar: u32) -> Result<(), GroebnerError> {
        let g = self.make_monic(g);
        if g.max_degree() > self.limits.degree_cap {
            return Err(GroebnerError::ResourceLimit(format!(
                "basis element of degree {} exceeds degree cap {}",
                g.max_degree(),
                self.limits.degree_cap
            )));
        }
        if state.basis.len() >= self.limits.max_basis {
            return Err(GroebnerError::ResourceLimit(format!("more than {} basis elements", self.limits.max_basis)));
        }
        let h = state.basis.len();
        let (ph, lh) = {
            let (p, m, _) = g.lead().unwrap();
            (*p, m.clone())
        };
        let lead = |i: usize| state.basis[i].lead().unwrap();

        let mut fresh: Vec<(Pair, bool)> = Vec::new();
        for i in 0..h {
            let (pi, li, _) = lead(i);
            if state.active[i] && *pi == ph {
                let coprime = self.rank == 1 && li.coprime(&lh);
                let l = li.lcm(&lh);
                let sugar = (state.sugar[i] + l.degree() - li.degree()).max(sugar + l.degree() - lh.degree());
                fresh.push((Pair { i, j: h, pos: ph, lcm: l, sugar }, coprime));
            }
        }
        // a new pair whose lcm is properly divisible by another new lcm is redundant
        let keep: Vec<bool> = fresh
            .iter()
            .map(|(p, _)| !fresh.iter().any(|(q, _)| q.lcm != p.lcm && q.lcm.divides(&p.lcm)))
            .collect();
        let mut survivors: Vec<(Pair, bool)> = fresh.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
        // one pair per lcm; none at all if some pair with that lcm is coprime
        let mut chosen: Vec<Pair> = Vec::new();
        while let Some((p, _)) = survivors.first().cloned() {
            let group: Vec<(Pair, bool)> = survivors.iter().filter(|(q, _)| q.lcm == p.lcm).cloned().collect();
            survivors.retain(|(q, _)| q.lcm != p.lcm);
            if !group.iter().any(|(_, c)| *c) {
                chosen.push(p);
            }
        }
        // chain criterion on the old pairs
        let basis = &state.basis;
        state.pairs.retain(|p| {
            if p.pos != ph || !lh.divides(&p.lcm) {
                return true;
            }
            let li = &basis[p.i].lead().unwrap().1;
            let lj = &basis[p.j].lead().unwrap().1;
            li.lcm(&lh) == p.lcm || lj.lcm(&lh) == p.lcm
        });
        for i in 0..h {
            let (pi, li, _) = state.basis[i].lead().unwrap();
            if *pi == ph && lh.divides(li) {
                state.active[i] = false;
            }
        }
        state.pairs.extend(chosen);
        state.basis.push(g);
        state.active.push(true);
        state.sugar.push(sugar);
        Ok(())
    }

    fn reduce_basis(&self, basis: Vec<MVec<F::C>>) -> Vec<MVec<F::C>> {
        // minimal basis: drop elements whose leading term is divisible by another's
        let mut keep: Vec<MVec<F::C>> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let (gp, gm, _) = g.lead().unwrap();
            let redundant = basis.iter().enumerate().any(|(j, h)| {
                if i == j {
                    return false;
                }
                let (hp, hm, _) = h.lead().unwrap();
                hp == gp && hm.divides(gm) && (hm != gm || j < i)
            });
            if !redundant {
                keep.push(g.clone());
            }
        }
        let mut reduced: Vec<MVec<F::C>> = Vec::with_capacity(keep.len());
        for i in 0..keep.len() {
            let others: Vec<MVec<F::C>> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let r = self.normal_form(&keep[i], &others);
            reduced.push(self.make_monic(r));
        }
        reduced.sort_by(|a, b| {
            let (ap, am, _) = a.lead().unwrap();
            let (bp, bm, _) = b.lead().unwrap();
            self.cmp((*ap, am), (*bp, bm))
        });
        reduced
    }
}
