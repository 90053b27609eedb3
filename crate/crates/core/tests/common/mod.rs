#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use rand::Rng;
use tgc::groebner::{ring_map_kernel, Limits};
use tgc::polycore::{CoefficientDomain, Monomial, Polynomial, VariableContext};
use tgc::presentations::{AlgebraMorphism, AlgebraPresentation};

pub const Q: CoefficientDomain = CoefficientDomain::Rationals;

pub fn workspace(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("workspaces").join(name)
}

pub fn load(name: &str) -> tgc::cli::Workspace {
    tgc::cli::parse_workspace(&std::fs::read_to_string(workspace(name)).unwrap()).unwrap()
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn tgc(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tgc"));
    cmd.args(args).env_remove("TGC_DEGREE_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn tgc");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn random_poly(rng: &mut impl Rng, ctx: &Arc<VariableContext>, max_degree: u32, max_terms: usize) -> Polynomial {
    let n = ctx.len();
    let terms: Vec<_> = (0..rng.gen_range(1..=max_terms))
        .map(|_| {
            let mut e = vec![0u32; n];
            if n > 0 {
                for _ in 0..rng.gen_range(0..=max_degree) {
                    e[rng.gen_range(0..n)] += 1;
                }
            }
            (Monomial::from_exponents(e), Q.from_i64(rng.gen_range(-3..=3)))
        })
        .collect();
    Polynomial::from_terms(ctx, Q, terms)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `ℚ[y]/(∏_k (y_i - r_ik), optional extra relation)` with roots `r_ik ∈ {-1, 0, 1}`:
/// finite-dimensional, rational residue fields, nilpotents from repeated roots.
pub fn random_fd_algebra(rng: &mut impl Rng, name: &str, prefix: &str, nvars: usize, max_exp: u32) -> Arc<AlgebraPresentation> {
    let vars = names(prefix, nvars);
    let ctx = AlgebraPresentation::context_for(None, &vars).unwrap();
    let mut rels = Vec::new();
    for i in 0..nvars {
        let mut r = Polynomial::one(&ctx, Q);
        for _ in 0..rng.gen_range(1..=max_exp) {
            r = &r * &(&Polynomial::var(&ctx, Q, i) - &Polynomial::from_int(&ctx, Q, rng.gen_range(-1..=1)));
        }
        rels.push(r);
    }
    if rng.gen_bool(0.3) {
        rels.push(random_poly(rng, &ctx, 2, 2));
    }
    Arc::new(AlgebraPresentation::new(name, Q, None, vars, rels).unwrap())
}

/// Source `ℚ[x]/I` with `I` the kernel of `x ↦ images`, or that kernel times
/// the maximal ideal at a random rational point.
fn source_for(rng: &mut impl Rng, nvars: usize, targets: &[(&Arc<AlgebraPresentation>, &[Polynomial])]) -> Arc<AlgebraPresentation> {
    let vars = names("x", nvars);
    let ctx = AlgebraPresentation::context_for(None, &vars).unwrap();
    let free = Arc::new(AlgebraPresentation::new("P", Q, None, vars.clone(), vec![]).unwrap());
    let mut ideal: Option<Vec<Polynomial>> = None;
    for (b, ims) in targets {
        let k = ring_map_kernel(&AlgebraMorphism::new("k", free.clone(), (*b).clone(), ims.to_vec(), false).unwrap(), &Limits::default())
            .unwrap();
        ideal = Some(match ideal {
            None => k,
            Some(prev) => prev.iter().flat_map(|p| k.iter().map(move |q| p * q)).collect(),
        });
    }
    let mut rels = ideal.unwrap();
    if targets.len() == 1 && rng.gen_bool(0.5) {
        let maximal: Vec<Polynomial> = (0..nvars)
            .map(|i| &Polynomial::var(&ctx, Q, i) - &Polynomial::from_int(&ctx, Q, rng.gen_range(-1..=1)))
            .collect();
        rels = rels.iter().flat_map(|p| maximal.iter().map(move |m| p * m)).collect();
    }
    Arc::new(AlgebraPresentation::new("A", Q, None, vars, rels).unwrap())
}

pub struct FdShape {
    pub max_vars: usize,
    pub max_exp: u32,
    pub max_degree: u32,
}

/// A well-defined morphism of finite-dimensional ℚ-algebras.
pub fn random_fd_morphism(rng: &mut impl Rng, shape: &FdShape) -> AlgebraMorphism {
    let nb = rng.gen_range(1..=shape.max_vars);
    let b = random_fd_algebra(rng, "B", "y", nb, shape.max_exp);
    let na = rng.gen_range(1..=shape.max_vars);
    let ims: Vec<Polynomial> = (0..na).map(|_| random_poly(rng, b.ctx(), shape.max_degree, 3)).collect();
    let a = source_for(rng, na, &[(&b, &ims)]);
    AlgebraMorphism::new("f", a, b, ims, false).unwrap()
}

/// Two well-defined morphisms `A → B`, `A → C` out of one finite-dimensional source.
pub fn random_fd_cospan(rng: &mut impl Rng, shape: &FdShape) -> (AlgebraMorphism, AlgebraMorphism) {
    let nb = rng.gen_range(1..=shape.max_vars);
    let b = random_fd_algebra(rng, "B", "y", nb, shape.max_exp);
    let nc = rng.gen_range(1..=shape.max_vars);
    let c = random_fd_algebra(rng, "C", "z", nc, shape.max_exp);
    let na = rng.gen_range(1..=shape.max_vars);
    let fi: Vec<Polynomial> = (0..na).map(|_| random_poly(rng, b.ctx(), shape.max_degree, 2)).collect();
    let gi: Vec<Polynomial> = (0..na).map(|_| random_poly(rng, c.ctx(), shape.max_degree, 2)).collect();
    let a = source_for(rng, na, &[(&b, &fi), (&c, &gi)]);
    (
        AlgebraMorphism::new("f", a.clone(), b, fi, false).unwrap(),
        AlgebraMorphism::new("g", a, c, gi, false).unwrap(),
    )
}

pub fn alg_q(name: &str, vars: &[&str], rels: &[&str]) -> Arc<AlgebraPresentation> {
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let ctx = AlgebraPresentation::context_for(None, &names).unwrap();
    let rels = rels.iter().map(|r| tgc::polycore::parse_polynomial(r, &ctx, Q).unwrap()).collect();
    Arc::new(AlgebraPresentation::new(name, Q, None, names, rels).unwrap())
}
