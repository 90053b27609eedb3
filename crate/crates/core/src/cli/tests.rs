use proptest::prelude::*;

use super::*;
use crate::classify::PREDICATES;
use crate::groebner::Limits;
use crate::polycore::CoefficientDomain;

const F1: &str = "\
field Q
base R = vars(t) / ()
algebra A over R = vars() / ()
algebra B over R = vars() / (t^2)
algebra P = vars(x) / ()
algebra Y = vars(y) / ()
morphism q : A -> B over R = { }
morphism f : P -> Y = { x -> y^2 }
cdcmap g : 2 -> 1 over Q = ( x1 )
section s for g = ( x1, x2, w1, w1^2 + x1*w1 )
";

#[test]
fn dual_numbers_over_f2() {
    let ws = parse_workspace("field F2\nalgebra B = vars(x) / (x^2)").unwrap();
    assert_eq!(ws.field, CoefficientDomain::PrimeField(2));
    let b = &ws.algebra("B").unwrap().presentation;
    assert_eq!(b.ideal()[0].to_string(), "x^2");
    let semi = parse_workspace("field Fp 2; algebra B = vars(x)/(x^2)").unwrap();
    assert_eq!(semi.algebra("B").unwrap().presentation.ideal(), b.ideal());
}

#[test]
fn empty_relations_give_a_polynomial_ring() {
    let ws = parse_workspace("field Q\nalgebra A = vars(x, y) / ( )").unwrap();
    let a = &ws.algebra("A").unwrap().presentation;
    assert!(a.ideal().is_empty());
    assert_eq!(a.ctx().names(), ["x", "y"]);
}

#[test]
fn parabola_morphism() {
    let ws = parse_workspace(F1).unwrap();
    let f = &ws.morphism("f").unwrap().morphism;
    assert_eq!(f.images()[0].to_string(), "y^2");
    assert!(f.check_well_defined(&Limits::default()).is_ok());
    assert!(ws.morphism("q").unwrap().morphism.over_base());
    assert_eq!(ws.section("s").unwrap().map.ctx().names(), ["x1", "x2", "w1"]);
}

#[test]
fn parse_errors_carry_locations() {
    let e = parse_workspace("field Q\nalgebra A = vars(x) / (x^2 +)").unwrap_err();
    match e {
        WorkspaceError::Parse { loc, .. } => assert_eq!((loc.line, loc.col), (2, 29)),
        e => panic!("{e}"),
    }
    let e = parse_workspace("field Q\nalgebre A = vars(x) / ()").unwrap_err();
    match &e {
        WorkspaceError::Parse { loc, expected, found } => {
            assert_eq!((loc.line, loc.col), (2, 1));
            assert!(expected.contains(&"`algebra`".to_string()));
            assert_eq!(found, "`algebre`");
        }
        e => panic!("{e}"),
    }
    assert!(e.to_string().starts_with("line 2, column 1: expected"));
    let e = parse_workspace("field Q\nalgebra A = vars(x) (x)").unwrap_err();
    assert!(matches!(e, WorkspaceError::Parse { loc: Location { line: 2, col: 21 }, .. }), "{e:?}");
}

#[test]
fn duplicates_and_unresolved_names() {
    let e = parse_workspace("field Q\nalgebra A = vars(x) / ()\nalgebra A = vars(y) / ()").unwrap_err();
    assert!(matches!(e, WorkspaceError::DuplicateName { kind: "algebra", first: Location { line: 2, .. }, loc: Location { line: 3, .. }, .. }));
    let e = parse_workspace("field Q\nalgebra A = vars(x) / ()\nmorphism f : A -> C = { x -> x }").unwrap_err();
    assert!(matches!(e, WorkspaceError::UnresolvedReference { kind: "algebra", ref name, .. } if name == "C"));
    let e = parse_workspace("field Q\nalgebra A = vars(x) / ()\nmorphism f : A -> A = { z -> x }").unwrap_err();
    assert!(matches!(e, WorkspaceError::UnresolvedReference { kind: "source variable", .. }));
    let e = parse_workspace("field Q\nsection s for g = ( x1 )").unwrap_err();
    assert!(matches!(e, WorkspaceError::UnresolvedReference { kind: "cdcmap", .. }));
    // same name in different kinds is fine
    assert!(parse_workspace("field Q\nalgebra f = vars(x) / ()\nmorphism f : f -> f = { x -> x }").is_ok());
}

#[test]
fn semantic_errors() {
    assert!(matches!(parse_workspace("field Fp 4").unwrap_err(), WorkspaceError::Invalid { .. }));
    assert!(matches!(parse_workspace("field Q\nalgebra A = vars(x)/()\nmorphism f : A -> A = { }").unwrap_err(), WorkspaceError::Invalid { .. }));
    assert!(matches!(parse_workspace("cdcmap g : 1 -> 2 over Z = ( x1 )").unwrap_err(), WorkspaceError::Invalid { .. }));
    assert!(matches!(parse_workspace("algebra A = vars(x)/()\nfield Q").unwrap_err(), WorkspaceError::Invalid { .. }));
}

#[test]
fn text_round_trip_of_the_sample() {
    let ws = parse_workspace(F1).unwrap();
    let again = parse_workspace(&ws.to_text()).unwrap();
    assert_eq!(again.to_text(), ws.to_text());
    for a in &ws.algebras {
        assert_eq!(*again.algebra(&a.name).unwrap().presentation, *a.presentation);
    }
    assert_eq!(again.cdcmaps, ws.cdcmaps);
}

#[test]
fn human_table_header_lists_predicates_in_order() {
    let ws = parse_workspace(F1).unwrap();
    let out = run(&Command::Classify { instance: InstanceArg::Affine, morphism: Some("q".into()), structure: None }, &ws, &Flags::default()).unwrap();
    let header = out.text.lines().nth(1).unwrap();
    let names: Vec<&str> = header.split_whitespace().collect();
    assert_eq!(names, PREDICATES);
    assert_eq!(out.json["predicates"]["T_etale"]["status"], "holds");
}

#[test]
fn general_regime_reason_appears_in_json() {
    let ws = parse_workspace("field Q\nalgebra A = vars(x)/()\nalgebra B = vars(x, y)/(y^2 - x)\nmorphism f : A -> B = { x -> x }").unwrap();
    let out = run(&Command::Classify { instance: InstanceArg::Affine, morphism: Some("f".into()), structure: None }, &ws, &Flags::default()).unwrap();
    let split = &out.json["predicates"]["split_T_submersion"];
    if split["status"] == "undetermined" {
        assert_eq!(split["reason"], "finite-dimensional regime required");
    }
    assert!(out.json["predicates"]["T_immersion"].get("reason").is_none());
}

#[test]
fn exit_codes() {
    use crate::error::Error;
    use crate::groebner::GroebnerError;
    let ws = parse_workspace("field Q\nalgebra A = vars(x)/(x^2)\nalgebra B = vars(y)/()\nmorphism bad : A -> B = { x -> y }").unwrap();
    let e = run(&Command::Classify { instance: InstanceArg::Calg, morphism: Some("bad".into()), structure: None }, &ws, &Flags::default()).unwrap_err();
    assert_eq!(exit_code(&e), 3);
    assert!(e.to_string().contains("x^2") && e.to_string().contains("y^2"));
    assert_eq!(exit_code(&CliError::Workspace(parse_workspace("nonsense").unwrap_err())), 2);
    assert_eq!(exit_code(&CliError::Core(Error::Groebner(GroebnerError::ResourceLimit("degree".into())))), 5);
    assert_eq!(exit_code(&CliError::Core(Error::EvidenceMismatch("x".into()))), 6);
    assert_eq!(exit_code(&CliError::Core(Error::InconsistentClassification("x".into()))), 6);
}

#[test]
fn linearize_command_reports_verified() {
    let ws = parse_workspace(F1).unwrap();
    let out = run(&Command::CdcLinearize { map: "g".into(), section: "s".into() }, &ws, &Flags::default()).unwrap();
    assert_eq!(out.json["verified"], true);
    assert_eq!(out.json["linear_section"][3], "x1*w1");
}

#[test]
fn strip_timings_removes_nested_keys() {
    let mut v = serde_json::json!({"a": {"timings_ms": {"total": 3}, "b": 1}, "timings_ms": 1});
    strip_timings(&mut v);
    assert_eq!(v, serde_json::json!({"a": {"b": 1}}));
}

fn rel() -> impl Strategy<Value = String> {
    prop::collection::vec((1i64..=4, 0u32..3, 0u32..3, any::<bool>()), 1..4).prop_map(|ts| {
        let mut s = String::new();
        for (i, (c, a, b, neg)) in ts.iter().enumerate() {
            let sign = if *neg { "-" } else if i == 0 { "" } else { "+" };
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&format!("{sign} {c}/{}*x^{a}*y^{b}", c + 1));
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn round_trip_random_workspaces(r1 in rel(), r2 in rel(), im in rel(), c in rel()) {
        let text = format!(
            "field Q\nalgebra A = vars(x, y) / ({r1}, {r2})\nalgebra B = vars(x, y) / ()\nmorphism f : B -> A = {{ x -> {im}, y -> y }}\ncdcmap h : 2 -> 1 over Q = ({})\n",
            c.replace('x', "x1").replace('y', "x2")
        );
        let ws = parse_workspace(&text).unwrap();
        let again = parse_workspace(&ws.to_text()).unwrap();
        prop_assert_eq!(again.to_text(), ws.to_text());
        prop_assert_eq!(&again.algebras[0].relations, &ws.algebras[0].relations);
        prop_assert_eq!(again.morphisms[0].morphism.images(), ws.morphisms[0].morphism.images());
        prop_assert_eq!(&again.cdcmaps, &ws.cdcmaps);
    }
}
