use proptest::prelude::*;

use super::*;
use crate::classify::{Status, PREDICATES};
use crate::modlin::ExactMatrix;
use crate::oracle::OracleConfig;
use crate::test_support::Q;

const Z: CoefficientDomain = CoefficientDomain::Integers;
const N: CoefficientDomain = CoefficientDomain::Naturals;

fn map(n: usize, comps: &[&str]) -> CdcMap {
    CdcMap::parse("f", Q, n, comps).unwrap()
}

fn shown(f: &CdcMap) -> Vec<String> {
    f.components().iter().map(|c| c.to_string()).collect()
}

#[test]
fn differential_examples() {
    assert_eq!(shown(&differential(&map(1, &["x1^3"])).unwrap()), ["3*x1^2*x2"]);
    assert_eq!(shown(&differential(&map(2, &["x1*x2"])).unwrap()), ["x2*x3 + x1*x4"]);
    let lin = map(2, &["2*x1 - x2", "x2"]);
    let d = differential(&lin).unwrap();
    let f_pi1 = lin.then_inputs(&CdcMap::projection(Q, 4, 2..4)).unwrap();
    assert_eq!(d.components(), f_pi1.components());
}

#[test]
fn theta_examples() {
    let id = CdcMap::identity(Q, 1);
    assert_eq!(theta(&id).unwrap().components(), CdcMap::identity(Q, 2).components());
    assert_eq!(shown(&theta(&map(1, &["x1^2"])).unwrap()), ["x1", "2*x1*x2"]);
    let m = map(2, &["x1 + x2", "3*x2"]);
    let id_times_m = CdcMap::identity(Q, 2).product(&m).unwrap();
    assert_eq!(theta(&m).unwrap().components(), id_times_m.components());
}

#[test]
fn chain_rule_by_hand() {
    let f = map(1, &["x1^2"]);
    let g = map(1, &["x1 + 1"]);
    let rep = verify_cdc_axioms(&f, &g, None).unwrap();
    assert!(rep.all_hold(), "{rep:?}");
    assert_eq!(shown(&differential(&f.then(&g).unwrap()).unwrap()), ["2*x1*x2"]);
}

#[test]
fn all_axioms_for_cube_and_square_with_oracle() {
    let f = map(1, &["x1^3"]);
    let g = map(1, &["x1^2"]);
    let rep = verify_cdc_axioms(&f, &g, Some(&OracleConfig::default())).unwrap();
    assert!(rep.all_hold());
    for k in 1..=7 {
        assert!(rep.checks.iter().any(|c| c.name.starts_with(&format!("CD{k} "))), "CD{k} missing");
    }
    assert!(rep.checks.iter().all(|c| c.oracle.as_deref() == Some("probably equal")));
}

#[test]
fn identity_as_second_map() {
    let f = map(2, &["x1*x2 + x1^2", "x2^3"]);
    assert!(verify_cdc_axioms(&f, &CdcMap::identity(Q, 2), None).unwrap().all_hold());
    assert!(matches!(verify_cdc_axioms(&f, &CdcMap::identity(Q, 3), None), Err(Error::ArityMismatch(_))));
}

#[test]
fn broken_identity_reports_residual() {
    let mut rep = IdentityReport { checks: vec![] };
    rep.check("bogus", &map(1, &["x1^2"]), &map(1, &["x1"]), Some(&OracleConfig::default())).unwrap();
    assert!(!rep.all_hold());
    assert_eq!(rep.checks[0].residual, ["x1^2 - x1"]);
    assert_eq!(rep.checks[0].oracle.as_deref(), Some("definitely unequal"));
}

#[test]
fn tangent_identities_for_a_square() {
    let f = map(1, &["x1^2"]);
    let rep = verify_tangent_identities(&f, &CdcMap::identity(Q, 1), Some(&OracleConfig::default())).unwrap();
    assert!(rep.all_hold(), "{rep:?}");
    assert!(rep.get("θ-composition law").unwrap().holds);
    assert!(rep.get("θ-flip law").unwrap().holds);
}

#[test]
fn flip_on_arity_one() {
    let s = CdcStructure::new(Q, 1).unwrap();
    assert_eq!(shown(&s.flip), ["x1", "x3", "x2", "x4"]);
    assert_eq!(s.flip.then(&s.flip).unwrap(), CdcMap::identity(Q, 4));
    assert_eq!(shown(&s.lift), ["x1", "0", "0", "x2"]);
}

#[test]
fn worked_section_linearizes() {
    let f = map(2, &["x1"]);
    let s = CdcMap::parse_in("s", Q, section_context(2, 1), &["x1", "x2", "w1", "w1^2 + x1*w1"]).unwrap();
    let sf = linearize_section(&f, &s).unwrap();
    assert_eq!(shown(&sf), ["x1", "x2", "w1", "x1*w1"]);
    assert_eq!(sf.standardized().then(&theta(&f).unwrap()).unwrap(), CdcMap::identity(Q, 3));
}

#[test]
fn linear_sections_are_fixed_and_offsets_removed() {
    let f = map(2, &["x1"]);
    let ctx = section_context(2, 1);
    let lin = CdcMap::parse_in("s", Q, ctx.clone(), &["x1", "x2", "w1", "x1*w1"]).unwrap();
    assert_eq!(linearize_section(&f, &lin).unwrap().components(), lin.components());
    let off = CdcMap::parse_in("s", Q, ctx, &["x1", "x2", "w1", "x1*w1 + 5 + x2^2"]).unwrap();
    assert_eq!(linearize_section(&f, &off).unwrap().components(), lin.components());
}

#[test]
fn non_sections_are_rejected() {
    let f = map(2, &["x1"]);
    let ctx = section_context(2, 1);
    let bad = CdcMap::parse_in("s", Q, ctx.clone(), &["x1", "x2", "2*w1", "0"]).unwrap();
    assert!(matches!(linearize_section(&f, &bad), Err(Error::NotASection(_))));
    let short = CdcMap::parse_in("s", Q, ctx, &["x1", "x2"]).unwrap();
    assert!(matches!(linearize_section(&f, &short), Err(Error::NotASection(_))));
    let fn_ = CdcMap::parse("f", N, 1, &["x1"]).unwrap();
    let sn = CdcMap::parse_in("s", N, section_context(1, 1), &["x1", "w1"]).unwrap();
    assert!(matches!(linearize_section(&fn_, &sn), Err(Error::UnsupportedDomain(_))));
}

fn statuses(m: &ExactMatrix) -> Vec<Status> {
    let r = classify_linear("M", m).unwrap();
    PREDICATES.iter().map(|k| r.status(k)).collect()
}

use Status::{Fails as F, Holds as H, Undetermined as U};

#[test]
fn naturals_addition_is_unramified_but_not_an_immersion() {
    let add = ExactMatrix::from_i64(N, &[vec![1, 1]]).unwrap();
    let r = classify_linear("add", &add).unwrap();
    assert_eq!(r.status("T_unramified"), H);
    assert_eq!(r.status("T_immersion"), F);
    assert_eq!(r.get("T_submersion").reason.as_deref(), Some(linear::NATURALS_OUT_OF_SCOPE));
    assert!(r.coherence.iter().all(|c| !c.implication.starts_with("T_unramified ⟹")));
}

#[test]
fn identity_matrix_satisfies_everything() {
    for d in [Q, Z, CoefficientDomain::PrimeField(7)] {
        assert_eq!(statuses(&ExactMatrix::identity(d, 3)), vec![H; 7]);
    }
    assert_eq!(statuses(&ExactMatrix::identity(N, 2)), vec![H, H, H, U, U, U, U]);
}

#[test]
fn doubling_over_rationals_and_integers() {
    assert_eq!(statuses(&ExactMatrix::from_i64(Q, &[vec![2]]).unwrap()), vec![H; 7]);
    let r = classify_linear("two", &ExactMatrix::from_i64(Z, &[vec![2]]).unwrap()).unwrap();
    assert_eq!(r.status("T_immersion"), H);
    assert_eq!(r.status("split_T_submersion"), F);
    assert_eq!(r.status("T_etale"), F);
}

#[test]
fn rectangular_matrices() {
    // injective, not surjective
    assert_eq!(statuses(&ExactMatrix::from_i64(Q, &[vec![1], vec![1]]).unwrap()), vec![H, H, H, F, F, F, F]);
    // surjective with a kernel
    assert_eq!(statuses(&ExactMatrix::from_i64(Q, &[vec![1, 1]]).unwrap()), vec![F, F, F, H, H, F, F]);
}

#[test]
fn nonlinear_maps_are_undetermined() {
    let r = classify_cdc_map(&map(1, &["x1^2"])).unwrap();
    assert!(PREDICATES.iter().all(|k| r.get(k).reason.as_deref() == Some(linear::NONLINEAR_UNDECIDED)));
    let r = classify_cdc_map(&map(2, &["x1 + x2"])).unwrap();
    assert_eq!(r.status("T_submersion"), H);
}

fn poly_str(nvars: usize) -> impl Strategy<Value = String> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(0u32..3, nvars)), 1..4).prop_map(move |ts| {
        ts.iter()
            .map(|(c, e)| {
                let mut s = format!("({c})");
                for (i, k) in e.iter().enumerate() {
                    s.push_str(&format!("*x{}^{k}", i + 1));
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn random_map(n: usize, m: usize) -> impl Strategy<Value = CdcMap> {
    prop::collection::vec(poly_str(n), m).prop_map(move |cs| {
        let refs: Vec<&str> = cs.iter().map(String::as_str).collect();
        CdcMap::parse("f", Q, n, &refs).unwrap()
    })
}

fn composable() -> impl Strategy<Value = (CdcMap, CdcMap)> {
    (1usize..=3, 1usize..=3, 1usize..=2).prop_flat_map(|(n, m, k)| (random_map(n, m), random_map(m, k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn differential_is_additive_in_the_vector(f in (1usize..=3).prop_flat_map(|n| random_map(n, 2))) {
        let n = f.arity();
        let d = differential(&f).unwrap();
        let s = CdcStructure::new(Q, n).unwrap();
        let pick = |b: usize| CdcMap::projection(Q, 3 * n, (0..n).chain(b..b + n));
        let lhs = d.then_inputs(&s.add).unwrap();
        let rhs = d.then_inputs(&pick(n)).unwrap().add(&d.then_inputs(&pick(2 * n)).unwrap()).unwrap();
        prop_assert_eq!(lhs.components(), rhs.components());
    }

    #[test]
    fn chain_rule_and_theta_composition((f, g) in composable()) {
        let rep = verify_cdc_axioms(&f, &g, None).unwrap();
        prop_assert!(rep.get("CD5 chain rule").unwrap().holds);
        let rep = verify_tangent_identities(&f, &g, None).unwrap();
        prop_assert!(rep.all_hold(), "{:?}", rep);
    }

    #[test]
    fn linearizing_twice_equals_once(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3) {
        let f = map(2, &["x1"]);
        let q = format!("({a})*w1^2 + ({b})*x2*w1^3 + ({c})*x1");
        let s = CdcMap::parse_in("s", Q, section_context(2, 1), &["x1", "x2", "w1", &q]).unwrap();
        let once = linearize_section(&f, &s).unwrap();
        let twice = linearize_section(&f, &once).unwrap();
        prop_assert_eq!(once.components(), twice.components());
    }

    #[test]
    fn invertible_matrices_are_etale_with_invertible_theta(entries in prop::collection::vec(-5i64..=5, 9)) {
        let rows: Vec<Vec<i64>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let m = ExactMatrix::from_i64(Q, &rows).unwrap();
        prop_assume!(!num_traits::Zero::is_zero(&m.determinant().unwrap()));
        let r = classify_linear("M", &m).unwrap();
        prop_assert_eq!(r.status("T_etale"), Status::Holds);
        let inv = m.right_inverse().unwrap().unwrap();
        let f = CdcMap::linear("M", Q, m.rows(), 3);
        let finv = CdcMap::linear("Minv", Q, inv.rows(), 3);
        let th = theta(&f).unwrap();
        let th_inv = CdcMap::identity(Q, 3).product(&finv).unwrap();
        prop_assert_eq!(th.then(&th_inv).unwrap().components().to_vec(), CdcMap::identity(Q, 6).components().to_vec());
        prop_assert_eq!(th_inv.then(&th).unwrap().components().to_vec(), CdcMap::identity(Q, 6).components().to_vec());
    }
}
