use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::groebner::Limits;
use crate::polycore::{CoefficientDomain, Polynomial, VariableContext};
use crate::presentations::AlgebraPresentation;

const Q: CoefficientDomain = CoefficientDomain::Rationals;

fn q(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

fn algebra(vars: &[&str], rels: &[&str]) -> AlgebraPresentation {
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let ctx = AlgebraPresentation::context_for(None, &names).unwrap();
    let rels = rels.iter().map(|r| crate::polycore::parse_polynomial(r, &ctx, Q).unwrap()).collect();
    AlgebraPresentation::new("A", Q, None, names, rels).unwrap()
}

#[test]
fn staircase_bases() {
    let lim = Limits::default();
    let b = fd_basis(&algebra(&["x"], &["x^2"]), &lim).unwrap().unwrap();
    assert_eq!(b.dim(), 2);
    assert!(fd_basis(&algebra(&["x"], &[]), &lim).unwrap().is_none());
    let b = fd_basis(&algebra(&["x", "y"], &["x^2 - y", "y^2 - y"]), &lim).unwrap().unwrap();
    assert_eq!(b.dim(), 4);
    let shown: Vec<String> = b.monomials().iter().map(|m| b.element(m).to_string()).collect();
    let mut shown = shown;
    shown.sort();
    assert_eq!(shown, vec!["1", "x", "x*y", "y"]);
    let zero = fd_basis(&algebra(&["x"], &["x", "x - 1"]), &lim).unwrap().unwrap();
    assert_eq!(zero.dim(), 0);
}

#[test]
fn rank_kernel_solve() {
    assert_eq!(ExactMatrix::identity(Q, 4).rank(), 4);
    let m = ExactMatrix::from_i64(Q, &[vec![1, 1]]).unwrap();
    assert_eq!(m.kernel(), vec![vec![q(-1), q(1)]]);
    let two = ExactMatrix::from_i64(Q, &[vec![2]]).unwrap();
    assert_eq!(two.solve(&[q(1)]).unwrap(), Some(vec![Coeff::new(1.into(), 2.into())]));
    let two_z = ExactMatrix::from_i64(CoefficientDomain::Integers, &[vec![2]]).unwrap();
    assert_eq!(two_z.integer_solve(&[BigInt::from(1)]).unwrap(), None);
    assert!(two_z.integer_right_inverse().unwrap().is_none());
}

#[test]
fn determinant_and_prime_field_rank() {
    let m = ExactMatrix::from_i64(Q, &[vec![2, 1], vec![1, 1]]).unwrap();
    assert_eq!(m.determinant().unwrap(), q(1));
    let f3 = CoefficientDomain::prime_field(3).unwrap();
    let m = ExactMatrix::from_i64(f3, &[vec![1, 2], vec![2, 1]]).unwrap();
    // det = -3 = 0 mod 3
    assert_eq!(m.rank(), 1);
}

#[test]
fn integer_right_inverse_exists_for_unimodular_rows() {
    let m = ExactMatrix::from_i64(CoefficientDomain::Integers, &[vec![2, 3]]).unwrap();
    let r = m.integer_right_inverse().unwrap().unwrap();
    assert!(m.mul(&r).unwrap().is_identity());
}

fn rank_one_module(ctx: &Arc<VariableContext>, ideal: &[Polynomial]) -> FdModuleBasis {
    FdModuleBasis::new(ctx, Q, 1, ideal, &[], &Limits::default()).unwrap().unwrap()
}

#[test]
fn retraction_of_identity_and_zero_source() {
    let ctx = VariableContext::arc(["y"]);
    let y3 = crate::polycore::parse_polynomial("y^3", &ctx, Q).unwrap();
    let m = rank_one_module(&ctx, std::slice::from_ref(&y3));
    let one = Polynomial::one(&ctx, Q);
    let r = retraction_solve(&m, 1, &[], &[vec![one.clone()]]).unwrap().unwrap();
    assert_eq!(r, vec![vec![one.clone()]]);
    // M = 0: the empty retraction
    let zero = FdModuleBasis::new(&ctx, Q, 0, &[y3.clone()], &[], &Limits::default()).unwrap().unwrap();
    let r = retraction_solve(&zero, 1, &[], &[]).unwrap().unwrap();
    assert_eq!(r, vec![Vec::<Polynomial>::new()]);
}

#[test]
fn multiplication_by_non_unit_has_no_retraction() {
    let ctx = VariableContext::arc(["y"]);
    let y3 = crate::polycore::parse_polynomial("y^3", &ctx, Q).unwrap();
    let m = rank_one_module(&ctx, &[y3]);
    let two_y = crate::polycore::parse_polynomial("2*y", &ctx, Q).unwrap();
    assert!(retraction_solve(&m, 1, &[], &[vec![two_y]]).unwrap().is_none());
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..4, cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solutions_verify_by_substitution(rows in 1usize..4, cols in 1usize..4, seed in small_matrix(3, 4), b in prop::collection::vec(-3i64..4, 3)) {
        let a: Vec<Vec<i64>> = seed.iter().take(rows).map(|r| r[..cols].to_vec()).collect();
        let m = ExactMatrix::from_i64(Q, &a).unwrap();
        let rhs: Vec<Coeff> = b[..rows].iter().map(|&v| q(v)).collect();
        if let Some(x) = m.solve(&rhs).unwrap() {
            prop_assert_eq!(m.apply(&x).unwrap(), rhs.clone());
        } else {
            prop_assert!(m.rank() < rows);
        }
        for k in m.kernel() {
            prop_assert!(m.apply(&k).unwrap().iter().all(|c| c == &q(0)));
        }
        prop_assert_eq!(m.rank() + m.kernel().len(), cols);
        let bz: Vec<BigInt> = b[..rows].iter().map(|&v| BigInt::from(v)).collect();
        if let Some(x) = m.integer_solve(&bz).unwrap() {
            let xq: Vec<Coeff> = x.into_iter().map(Coeff::from_integer).collect();
            prop_assert_eq!(m.apply(&xq).unwrap(), rhs);
        }
    }

    // over B = k every module map is k-linear: split monic iff injective
    #[test]
    fn retraction_agrees_with_rank_over_the_field(s in 1usize..3, t in 1usize..4, seed in small_matrix(3, 3)) {
        let ctx = VariableContext::arc(Vec::<String>::new());
        let m = FdModuleBasis::new(&ctx, Q, s, &[], &[], &Limits::default()).unwrap().unwrap();
        let cols: Vec<Vec<Polynomial>> = (0..s)
            .map(|i| (0..t).map(|j| Polynomial::from_int(&ctx, Q, seed[j][i])).collect())
            .collect();
        let mat = ExactMatrix::from_rows(Q, s, (0..t).map(|j| (0..s).map(|i| q(seed[j][i])).collect()).collect()).unwrap();
        let r = retraction_solve(&m, t, &[], &cols).unwrap();
        prop_assert_eq!(r.is_some(), mat.rank() == s);
        if let Some(r) = r {
            let rm = ExactMatrix::from_rows(Q, t, (0..s).map(|i| (0..t).map(|j| r[j][i].constant_term()).collect()).collect()).unwrap();
            prop_assert!(rm.mul(&mat).unwrap().is_identity());
        }
    }
}
