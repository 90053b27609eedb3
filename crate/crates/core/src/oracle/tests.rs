use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::cdc::{differential, tangent, CdcMap};
use crate::classify::{classify_affine, classify_calg, MatrixData, PredicateStatus, Status};
use crate::groebner::Limits;
use crate::modlin::ExactMatrix;
use crate::polycore::{parse_polynomial, VariableContext};
use crate::test_support::{alg, morph, Q};

fn poly(s: &str, vars: &[&str]) -> Polynomial {
    parse_polynomial(s, &VariableContext::arc(vars.iter().copied()), Q).unwrap()
}

#[test]
fn square_expansion_is_probably_equal() {
    let cfg = OracleConfig::default();
    let ctx = VariableContext::arc(["x"]);
    let p = parse_polynomial("(x+1)^2", &ctx, Q).unwrap();
    let q = parse_polynomial("x^2 + 2*x + 1", &ctx, Q).unwrap();
    assert_eq!(identity_check(&p, &q, &cfg).unwrap(), OracleVerdict::ProbablyEqual);
}

#[test]
fn shifted_variable_is_definitely_unequal() {
    let ctx = VariableContext::arc(["x"]);
    let p = parse_polynomial("x", &ctx, Q).unwrap();
    let q = parse_polynomial("x + 1", &ctx, Q).unwrap();
    for seed in 0..5 {
        let cfg = OracleConfig::new(MERSENNE_61, 1, seed).unwrap();
        assert_eq!(identity_check(&p, &q, &cfg).unwrap(), OracleVerdict::DefinitelyUnequal);
    }
}

#[test]
fn chain_rule_instance_agrees_with_symbolic_zero() {
    let f = CdcMap::parse("f", Q, 1, &["x1^3"]).unwrap();
    let g = CdcMap::parse("g", Q, 1, &["x1^2"]).unwrap();
    let lhs = differential(&f.then(&g).unwrap()).unwrap();
    let rhs = tangent(&f).unwrap().then(&differential(&g).unwrap()).unwrap();
    assert_eq!(lhs.components(), rhs.components());
    let v = identity_check(&lhs.components()[0], &rhs.components()[0], &OracleConfig::default()).unwrap();
    assert_eq!(v, OracleVerdict::ProbablyEqual);
}

#[test]
fn config_validation() {
    assert!(OracleConfig::new(15, 4, 0).is_err());
    assert!(OracleConfig::new(MERSENNE_61, 0, 0).is_err());
    let d = OracleConfig::default();
    assert_eq!((d.prime(), d.samples(), d.seed()), (MERSENNE_61, 32, 0));
}

#[test]
fn denominators_divisible_by_the_prime_fall_back() {
    let cfg = OracleConfig::new(7, 8, 3).unwrap();
    let p = poly("x/7", &["x"]);
    assert_eq!(identity_check(&p, &p, &cfg).unwrap(), OracleVerdict::ProbablyEqual);
}

#[test]
fn prime_field_uses_its_characteristic() {
    let f5 = CoefficientDomain::PrimeField(5);
    let ctx = VariableContext::arc(["x"]);
    let p = parse_polynomial("x^5", &ctx, f5).unwrap();
    let q = parse_polynomial("x", &ctx, f5).unwrap();
    // equal as functions on F_5, distinct as polynomials: the oracle only corroborates
    assert_eq!(identity_check(&p, &q, &OracleConfig::default()).unwrap(), OracleVerdict::ProbablyEqual);
}

#[test]
fn section_witness_replays() {
    let a = alg("A", Q, &["x"], &["x^2 - x"]);
    let k = alg("K", Q, &[], &[]);
    let r = classify_calg(&morph(&a, &k, &["0"]), &Limits::default()).unwrap();
    let v = replay_evidence(&r).unwrap();
    assert!(v.verified.iter().any(|s| s.starts_with("split_T_submersion: section_witness")), "{v:?}");
}

#[test]
fn quotient_kernel_generator_replays() {
    let a = alg("A", Q, &["t"], &[]);
    let b = alg("B", Q, &["t"], &["t^2"]);
    let r = classify_calg(&morph(&a, &b, &["t"]), &Limits::default()).unwrap();
    match r.get("T_monic").evidence.as_ref().unwrap() {
        Evidence::KernelElements { generators, .. } => assert_eq!(generators[0].to_string(), "t^2"),
        e => panic!("{e:?}"),
    }
    let v = replay_evidence(&r).unwrap();
    assert!(v.verified.iter().any(|s| s == "T_monic: kernel_elements"));
}

fn tamper(r: &mut ClassificationReport, key: &'static str) {
    let st = r.predicates.get_mut(key).unwrap();
    match st.evidence.as_mut().unwrap() {
        Evidence::Retraction { images, .. } => {
            let p = &images[0][0];
            images[0][0] = p.try_add(&Polynomial::one(p.ctx(), p.domain())).unwrap();
        }
        Evidence::RightInverse { matrix, .. } => {
            let m = &matrix.0;
            let mut rows = m.rows().to_vec();
            rows[0][0] += crate::polycore::Coeff::from_integer(1.into());
            *matrix = MatrixData(ExactMatrix::from_rows(m.domain(), m.ncols(), rows).unwrap());
        }
        e => panic!("nothing to tamper in {e:?}"),
    }
}

#[test]
fn tampered_retraction_is_rejected() {
    let a = alg("A", Q, &["x"], &["x^3"]);
    let b = alg("B", Q, &["x", "y"], &["x^3", "y^2"]);
    let mut r = classify_affine(&morph(&a, &b, &["x"]), None, &Limits::default()).unwrap();
    assert!(matches!(r.get("split_T_submersion").evidence, Some(Evidence::Retraction { .. })));
    assert!(replay_evidence(&r).unwrap().verified.iter().any(|s| s.contains("retraction")));
    tamper(&mut r, "split_T_submersion");
    assert!(matches!(replay_evidence(&r), Err(Error::EvidenceMismatch(_))));
}

#[test]
fn tampered_right_inverse_is_rejected() {
    let m = ExactMatrix::from_i64(Q, &[vec![1, 2], vec![0, 1]]).unwrap();
    let mut r = crate::cdc::classify_linear("M", &m).unwrap();
    assert!(replay_evidence(&r).is_ok());
    tamper(&mut r, "split_T_submersion");
    assert!(matches!(replay_evidence(&r), Err(Error::EvidenceMismatch(_))));
}

#[test]
fn forged_kernel_element_is_rejected() {
    let a = alg("A", Q, &["t"], &[]);
    let b = alg("B", Q, &["t"], &["t^2"]);
    let mut r = classify_calg(&morph(&a, &b, &["t"]), &Limits::default()).unwrap();
    let st: &mut PredicateStatus = r.predicates.get_mut("T_monic").unwrap();
    if let Some(Evidence::KernelElements { generators, .. }) = st.evidence.as_mut() {
        generators[0] = poly("t", &["t"]).remap(generators[0].ctx(), &[0]);
    }
    assert_eq!(r.status("T_monic"), Status::Fails);
    assert!(matches!(replay_evidence(&r), Err(Error::EvidenceMismatch(_))));
}

fn small_poly() -> impl Strategy<Value = String> {
    prop::collection::vec((-5i64..=5, 0u32..4, 0u32..4), 1..5).prop_map(|ts| {
        ts.iter().map(|(c, a, b)| format!("({c})*x^{a}*y^{b}")).collect::<Vec<_>>().join(" + ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn symbolic_equality_implies_probably_equal(p in small_poly(), q in small_poly(), seed in any::<u64>()) {
        let ctx: Arc<VariableContext> = VariableContext::arc(["x", "y"]);
        let pp = parse_polynomial(&p, &ctx, Q).unwrap();
        let qq = parse_polynomial(&q, &ctx, Q).unwrap();
        let prod = parse_polynomial(&format!("({p})*({q})"), &ctx, Q).unwrap();
        let cfg = OracleConfig::with_seed(seed);
        prop_assert_eq!(identity_check(&(&pp * &qq), &prod, &cfg).unwrap(), OracleVerdict::ProbablyEqual);
        let shifted = &prod + &Polynomial::one(&ctx, Q);
        prop_assert_eq!(identity_check(&shifted, &prod, &cfg).unwrap(), OracleVerdict::DefinitelyUnequal);
    }
}
