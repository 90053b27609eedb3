use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::polycore::parse_polynomial;

const Q: CoefficientDomain = CoefficientDomain::Rationals;

fn ctx(names: &[&str]) -> Arc<VariableContext> {
    VariableContext::arc(names.iter().copied())
}

fn p(c: &Arc<VariableContext>, s: &str) -> Polynomial {
    parse_polynomial(s, c, Q).unwrap()
}

fn gens_str(gb: &GroebnerBasis) -> Vec<String> {
    gb.generators().iter().map(|g| g.to_string()).collect()
}

#[test]
fn lex_basis_of_small_system() {
    let c = ctx(&["x", "y"]);
    let gb = buchberger(&c, Q, &[p(&c, "x^2 - y"), p(&c, "x^3 - x")], TermOrder::Lex, &Limits::default()).unwrap();
    let mut got = gens_str(&gb);
    got.sort();
    let mut want = vec!["x^2 - y".to_string(), "x*y - x".to_string(), "y^2 - y".to_string()];
    want.sort();
    assert_eq!(got, want);
    assert!(gb.is_reduced());
}

#[test]
fn normal_form_divides_out_leading_terms() {
    let c = ctx(&["x", "y"]);
    let gb = buchberger(&c, Q, &[p(&c, "x^2 - y")], TermOrder::GrevLex, &Limits::default()).unwrap();
    assert_eq!(gb.normal_form(&p(&c, "x^3")).unwrap(), p(&c, "x*y"));
    assert!(gb.contains(&p(&c, "x^4 - y^2")).unwrap());
}

#[test]
fn unit_and_zero_ideals() {
    let c = ctx(&["x"]);
    let gb = buchberger(&c, Q, &[p(&c, "x"), p(&c, "x + 1")], TermOrder::GrevLex, &Limits::default()).unwrap();
    assert!(gb.is_unit_ideal());
    assert_eq!(gens_str(&gb), vec!["1"]);
    let gb = buchberger(&c, Q, &[], TermOrder::GrevLex, &Limits::default()).unwrap();
    assert!(gb.is_zero_ideal());
}

#[test]
fn elimination_of_parametrised_curve() {
    // t ↦ (t^2, t^3): eliminating t gives the cusp
    let c = ctx(&["t", "x", "y"]);
    let e = elimination_ideal(&c, Q, &[p(&c, "x - t^2"), p(&c, "y - t^3")], 1, &Limits::default()).unwrap();
    assert_eq!(e.len(), 1);
    assert_eq!(e[0], p(&c, "x^3 - y^2"));
}

#[test]
fn prime_field_arithmetic_in_buchberger() {
    let f5 = CoefficientDomain::prime_field(5).unwrap();
    let c = ctx(&["x"]);
    let g = parse_polynomial("x^5 - x", &c, f5).unwrap();
    let h = parse_polynomial("x^2 + 1", &c, f5).unwrap();
    // x^2 + 1 = (x-2)(x+2) mod 5, both roots in F_5
    let gb = buchberger(&c, f5, &[g, h.clone()], TermOrder::GrevLex, &Limits::default()).unwrap();
    assert_eq!(gb.generators(), &[h]);
}

#[test]
fn integers_are_rejected() {
    let c = ctx(&["x"]);
    let g = parse_polynomial("2*x", &c, CoefficientDomain::Integers).unwrap();
    let err = buchberger(&c, CoefficientDomain::Integers, &[g], TermOrder::GrevLex, &Limits::default()).unwrap_err();
    assert_eq!(err, GroebnerError::UnsupportedDomain(CoefficientDomain::Integers));
}

#[test]
fn degree_cap_is_a_resource_limit() {
    let c = ctx(&["x", "y", "z"]);
    let gens = [p(&c, "x^3 - y*z"), p(&c, "y^3 - x*z^2"), p(&c, "z^3 - x^2*y")];
    let err = buchberger(&c, Q, &gens, TermOrder::Lex, &Limits::with_degree_cap(3)).unwrap_err();
    assert!(matches!(err, GroebnerError::ResourceLimit(_)));
}

#[test]
fn module_membership_and_normal_form() {
    let c = ctx(&["x", "y"]);
    let z = Polynomial::zero(&c, Q);
    let gens = vec![vec![p(&c, "x"), p(&c, "y")], vec![p(&c, "y"), z.clone()]];
    let mgb = module_buchberger(&c, Q, 2, &gens, TermOrder::GrevLex, &Limits::default()).unwrap();
    // x·(x,y) - y·(y,0) = (x^2 - y^2, x y)
    assert!(mgb.contains(&[p(&c, "x^2 - y^2"), p(&c, "x*y")]).unwrap());
    assert!(!mgb.contains(&[z.clone(), p(&c, "x")]).unwrap());
    let nf = mgb.normal_form(&[p(&c, "y"), z.clone()]).unwrap();
    assert!(nf.iter().all(Polynomial::is_zero));
}

#[test]
fn preimage_gives_annihilator() {
    // Ann(x) in k[x,y]/(x y) is (y)
    let c = ctx(&["x", "y"]);
    let ann = preimage_of_submodule(&c, Q, &[p(&c, "x*y")], &[vec![p(&c, "x")]], &[], &Limits::default()).unwrap();
    assert_eq!(ann, vec![vec![p(&c, "y")]]);
}

#[test]
fn lift_solves_linear_equation_over_ring() {
    // find a, b with a x + b y = x^2 + y^3
    let c = ctx(&["x", "y"]);
    let cols = vec![vec![p(&c, "x")], vec![p(&c, "y")]];
    let sol = solve_lift(&c, Q, &[], &cols, &[p(&c, "x^2 + y^3")], &[], &Limits::default()).unwrap().unwrap();
    let lhs = &(&sol[0] * &p(&c, "x")) + &(&sol[1] * &p(&c, "y"));
    assert_eq!(lhs, p(&c, "x^2 + y^3"));
    assert!(solve_lift(&c, Q, &[], &cols, &[p(&c, "1")], &[], &Limits::default()).unwrap().is_none());
}

fn small_poly(c: Arc<VariableContext>) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..3, 0u32..3), -3i64..4), 1..4).prop_map(move |ts| {
        Polynomial::from_terms(
            &c,
            Q,
            ts.into_iter().map(|((a, b), k)| (Monomial::from_exponents(vec![a, b]), Coeff::from_integer(k.into()))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basis_generates_the_same_ideal(
        gens in prop::collection::vec(small_poly(VariableContext::arc(["x", "y"])), 1..3),
        mult in small_poly(VariableContext::arc(["x", "y"])),
    ) {
        let c = gens[0].ctx().clone();
        let mult = mult.remap(&c, &[0, 1]);
        let gb = buchberger(&c, Q, &gens, TermOrder::GrevLex, &Limits::default()).unwrap();
        for g in &gens {
            prop_assert!(gb.contains(g).unwrap());
        }
        prop_assert!(gb.contains(&(&gens[0] * &mult)).unwrap());
        // every basis element reduces to zero against the input: compare both ways
        let regen = buchberger(&c, Q, gb.generators(), TermOrder::GrevLex, &Limits::default()).unwrap();
        prop_assert_eq!(regen.generators(), gb.generators());
    }

    #[test]
    fn normal_form_is_idempotent_and_congruent(
        gens in prop::collection::vec(small_poly(VariableContext::arc(["x", "y"])), 1..3),
        f in small_poly(VariableContext::arc(["x", "y"])),
    ) {
        let c = gens[0].ctx().clone();
        let f = f.remap(&c, &[0, 1]);
        let gb = buchberger(&c, Q, &gens, TermOrder::GrevLex, &Limits::default()).unwrap();
        let r = gb.normal_form(&f).unwrap();
        prop_assert_eq!(gb.normal_form(&r).unwrap(), r.clone());
        prop_assert!(gb.contains(&(&f - &r)).unwrap());
        let leads = gb.leading_monomials();
        for (m, _) in r.terms() {
            prop_assert!(!leads.iter().any(|l| l.divides(m)));
        }
    }
}

fn direct_basis(c: &Arc<VariableContext>, gens: &[Polynomial], order: TermOrder) -> Vec<Polynomial> {
    let e = engine::Engine::exact(order, Q, Limits::default(), 1);
    let input = gens.iter().map(|g| to_mvec(&e, std::slice::from_ref(g))).collect();
    e.buchberger(input).unwrap().iter().map(|b| from_mvec(b, 1, c, Q).pop().unwrap()).collect()
}

#[test]
fn modular_basis_of_a_swelling_ideal() {
    let c = ctx(&["y1", "y2", "y3", "z1", "z2", "z3"]);
    let gens: Vec<Polynomial> = [
        "y1^3 - y1^2",
        "y2^2 - 2*y2 + 1",
        "y3^3 - y3",
        "z1^3 - z1^2",
        "z2^2 - 2*z2 + 1",
        "z3^3 - z3",
        "-2*y1*y2^2 + y2^2 - 3*y2*y3 + 2*z1*z2^2 - z2^2 + 3*z2*z3",
    ]
    .iter()
    .map(|s| p(&c, s))
    .collect();
    let gb = buchberger(&c, Q, &gens, TermOrder::GrevLex, &Limits::default()).unwrap();
    assert_eq!(gb.generators().len(), 14);
    for g in &gens {
        assert!(gb.contains(g).unwrap());
    }
    let f5 = CoefficientDomain::prime_field(32003).unwrap();
    let gens_p: Vec<Polynomial> = gens.iter().map(|g| parse_polynomial(&g.to_string(), &c, f5).unwrap()).collect();
    let gbp = buchberger(&c, f5, &gens_p, TermOrder::GrevLex, &Limits::default()).unwrap();
    assert_eq!(gbp.leading_monomials(), gb.leading_monomials());
}

/// `ℚ[x_0..] → ℚ[y0, y1]/((y_i - a_i)(y_i - b_i))`.
fn fd_target_morphism(roots: &[(i64, i64)], images: &[Polynomial]) -> crate::presentations::AlgebraMorphism {
    use crate::test_support::{alg, morph};
    let rels: Vec<String> = roots.iter().enumerate().map(|(i, (a, b))| format!("(y{i} - ({a}))*(y{i} - ({b}))")).collect();
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    let b = alg("B", Q, &["y0", "y1"], &rels);
    let svars: Vec<String> = (0..images.len()).map(|i| format!("x{i}")).collect();
    let svars: Vec<&str> = svars.iter().map(String::as_str).collect();
    let a = alg("A", Q, &svars, &[]);
    let ims: Vec<String> = images.iter().map(|q| q.to_string()).collect();
    let ims: Vec<&str> = ims.iter().map(String::as_str).collect();
    morph(&a, &b, &ims)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modular_basis_matches_direct_buchberger(
        gens in prop::collection::vec(small_poly(VariableContext::arc(["x", "y"])), 1..4),
        order in prop::sample::select(vec![TermOrder::GrevLex, TermOrder::Lex, TermOrder::BlockElimination(1)]),
    ) {
        let c = gens[0].ctx().clone();
        let gb = buchberger(&c, Q, &gens, order, &Limits::default()).unwrap();
        prop_assert_eq!(gb.generators(), &direct_basis(&c, &gens, order)[..]);
    }

    #[test]
    fn fd_kernel_matches_elimination(
        roots in prop::collection::vec((-1i64..2, -1i64..2), 2),
        images in prop::collection::vec(small_poly(VariableContext::arc(["y0", "y1"])), 1..3),
    ) {
        let f = fd_target_morphism(&roots, &images);
        let l = Limits::default();
        let fast = ring_map_kernel(&f, &l).unwrap();
        let slow = kernels::kernel_by_elimination(&f, &l).unwrap();
        let ctx = f.source().ctx().clone();
        let fast_gb = buchberger(&ctx, Q, &fast, TermOrder::GrevLex, &l).unwrap();
        let slow_gb = buchberger(&ctx, Q, &slow, TermOrder::GrevLex, &l).unwrap();
        prop_assert_eq!(fast_gb.generators(), slow_gb.generators());
    }
}
