use std::sync::Arc;

use crate::polycore::{parse_polynomial, CoefficientDomain};
use crate::presentations::{AlgebraMorphism, AlgebraPresentation};

pub const Q: CoefficientDomain = CoefficientDomain::Rationals;

pub fn alg(name: &str, domain: CoefficientDomain, vars: &[&str], rels: &[&str]) -> Arc<AlgebraPresentation> {
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let ctx = AlgebraPresentation::context_for(None, &names).unwrap();
    let rels = rels.iter().map(|r| parse_polynomial(r, &ctx, domain).unwrap()).collect();
    Arc::new(AlgebraPresentation::new(name, domain, None, names, rels).unwrap())
}

pub fn over(name: &str, base: &Arc<AlgebraPresentation>, vars: &[&str], rels: &[&str]) -> Arc<AlgebraPresentation> {
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let ctx = AlgebraPresentation::context_for(Some(base), &names).unwrap();
    let rels = rels.iter().map(|r| parse_polynomial(r, &ctx, base.domain()).unwrap()).collect();
    Arc::new(AlgebraPresentation::new(name, base.domain(), Some(base.clone()), names, rels).unwrap())
}

/// Morphism not over a base, images parsed in the flattened target.
pub fn morph(a: &Arc<AlgebraPresentation>, b: &Arc<AlgebraPresentation>, images: &[&str]) -> AlgebraMorphism {
    let images = images.iter().map(|s| b.flattened().parse(s).unwrap()).collect();
    AlgebraMorphism::new("f", a.clone(), b.clone(), images, false).unwrap()
}

pub fn morph_over(a: &Arc<AlgebraPresentation>, b: &Arc<AlgebraPresentation>, images: &[&str]) -> AlgebraMorphism {
    let images = images.iter().map(|s| b.parse(s).unwrap()).collect();
    AlgebraMorphism::new("f", a.clone(), b.clone(), images, true).unwrap()
}
