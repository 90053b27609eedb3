//! The unified predicate vocabulary: per-instance classification of a morphism
//! and the implications between predicates.

mod report;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

pub use report::{
    Annotation, ClassificationReport, CoherenceItem, Evidence, Instance, MatrixData, ModuleReplay, PredicateStatus,
    RingReplay, Status, PREDICATES,
};

use crate::error::{Error, Result};
use crate::groebner::{ring_map_kernel, Limits};
use crate::kahler::{classify_cotangent, cotangent_map, detect_regime, jacobian_smoothness_note, SmoothnessHint};
use crate::modlin::Regime;
use crate::presentations::{
    is_injective, is_surjective, linear_section_exists, pushout, relative_presentation, AlgebraMorphism, SectionVerdict,
};

pub const NOT_FORMALLY_ETALE: &str = "not formally étale — see Jacobian";

fn ring_replay(f: &AlgebraMorphism, limits: &Limits) -> Result<Arc<RingReplay>> {
    Ok(Arc::new(RingReplay {
        domain: f.source().domain(),
        source_ctx: f.source().ctx().clone(),
        target_ctx: f.target().ctx().clone(),
        images: f.full_images(),
        source_gb: f.source().gb(limits)?.generators().to_vec(),
        target_gb: f.target().gb(limits)?.generators().to_vec(),
    }))
}

fn derived(parts: &[(&str, &PredicateStatus)]) -> Evidence {
    Evidence::Derived { from: parts.iter().map(|(k, s)| format!("{k}: {}", s.status)).collect() }
}

/// Kleene conjunction of two statuses.
pub(crate) fn and(a: &PredicateStatus, b: &PredicateStatus, names: (&str, &str)) -> PredicateStatus {
    let ev = derived(&[(names.0, a), (names.1, b)]);
    match (a.value(), b.value()) {
        (Some(false), _) | (_, Some(false)) => PredicateStatus::fails(ev),
        (Some(true), Some(true)) => PredicateStatus::holds(ev),
        _ => PredicateStatus::undetermined(
            a.reason.clone().or_else(|| b.reason.clone()).unwrap_or_else(|| "premise undetermined".into()),
        ),
    }
}

/// Covariant commutative-algebra instance.
pub fn classify_calg(f: &AlgebraMorphism, limits: &Limits) -> Result<ClassificationReport> {
    let start = Instant::now();
    f.check_well_defined(limits)?;
    let replay = ring_replay(f, limits)?;
    let mut r = ClassificationReport::new(Instance::Calg, f.name(), f.base_name());

    let inj = is_injective(f, limits)?;
    let monic = if inj.injective {
        PredicateStatus::holds(Evidence::KernelTrivial { eliminated_basis_size: 0 })
    } else {
        PredicateStatus::fails(Evidence::KernelElements { generators: inj.kernel.clone(), replay: Some(replay.clone()) })
    };
    let surj = is_surjective(f, limits)?;
    let submersion = match surj.missing() {
        None => {
            let preimages: BTreeMap<String, _> = f
                .target()
                .ctx()
                .names()
                .iter()
                .cloned()
                .zip(surj.preimages.iter().map(|p| p.clone().expect("surjective")))
                .collect();
            PredicateStatus::holds(Evidence::Preimages { preimages, replay: Some(replay.clone()) })
        }
        Some((j, nf)) => PredicateStatus::fails(Evidence::MissingPreimage {
            variable: f.target().ctx().name(j).to_string(),
            normal_form: nf.clone(),
        }),
    };
    let split = if submersion.is_fails() {
        PredicateStatus::fails(derived(&[("T_submersion", &submersion)]))
    } else {
        match linear_section_exists(f, limits)? {
            SectionVerdict::Holds { witness, kernel } => {
                PredicateStatus::holds(Evidence::SectionWitness { witness, kernel, replay: Some(replay.clone()) })
            }
            SectionVerdict::Fails { kernel, reason } => PredicateStatus::fails(Evidence::SectionInfeasible { kernel, reason }),
            SectionVerdict::Undetermined(reason) => PredicateStatus::undetermined(reason),
        }
    };
    let etale = and(&monic, &submersion, ("T_monic", "T_submersion"));
    let monic_etale = and(&monic, &split, ("T_monic", "split_T_submersion"));
    r.set("T_monic", monic.clone());
    r.set("T_immersion", monic.clone());
    r.set("T_unramified", monic);
    r.set("T_submersion", submersion);
    r.set("split_T_submersion", split);
    r.set("T_etale", etale);
    r.set("monic_T_etale", monic_etale);
    r.coherence = coherence_check(&r, true)?;
    r.timings_ms.insert("total".into(), start.elapsed().as_millis() as u64);
    Ok(r)
}

/// Ring epimorphism test: the multiplication `B ⊗_A B → B` has zero kernel.
pub fn is_ring_epimorphism(f: &AlgebraMorphism, limits: &Limits) -> Result<PredicateStatus> {
    let po = pushout(f, f, limits)?;
    let b = f.target();
    let nb = b.n_base();
    let images = (0..2 * b.n_relative()).map(|k| b.var(nb + k % b.n_relative())).collect();
    let mu = AlgebraMorphism::new("μ", po.algebra.clone(), b.clone(), images, f.over_base())?;
    mu.check_well_defined(limits)?;
    let kernel = ring_map_kernel(&mu, limits)?;
    Ok(if kernel.is_empty() {
        PredicateStatus::holds(Evidence::KernelTrivial { eliminated_basis_size: 0 })
    } else {
        PredicateStatus::fails(Evidence::KernelElements { generators: kernel, replay: Some(ring_replay(&mu, limits)?) })
    })
}

/// Affine-scheme instance: `f: A → B` read as `Spec B → Spec A`.
pub fn classify_affine(f: &AlgebraMorphism, regime: Option<Regime>, limits: &Limits) -> Result<ClassificationReport> {
    let start = Instant::now();
    f.check_well_defined(limits)?;
    let mut r = ClassificationReport::new(Instance::Affine, f.name(), f.base_name());
    let seq = cotangent_map(f, limits)?;
    let regime = match regime {
        Some(g) => g,
        None => detect_regime(&seq, limits)?,
    };
    let v = classify_cotangent(&seq, regime, limits)?;
    let monic = is_ring_epimorphism(f, limits)?;
    let monic_etale = and(&monic, &v.split_monic, ("T_monic", "split_T_submersion"));
    r.set("T_monic", monic);
    r.set("T_immersion", v.coker_zero.clone());
    r.set("T_unramified", v.coker_zero);
    r.set("T_submersion", v.monic);
    r.set("split_T_submersion", v.split_monic);
    r.set("T_etale", v.iso);
    r.set("monic_T_etale", monic_etale);
    r.annotate(
        "regime",
        match regime {
            Regime::FiniteDimensional => "finite-dimensional",
            Regime::General => "general",
        },
    );
    r.annotate("cotangent_sequence_exact", seq.check_exactness(limits)?.to_string());
    let (rel, _) = relative_presentation(f)?;
    let note = jacobian_smoothness_note(&rel, limits)?;
    r.annotate(
        "jacobian_smoothness_note",
        match note.formally_smooth_hint {
            SmoothnessHint::Yes => "formally smooth",
            SmoothnessHint::No => "not formally smooth",
            SmoothnessHint::Undetermined => "undetermined",
        },
    );
    r.annotate("jacobian_detail", note.detail);
    if r.get("T_etale").is_holds() && note.formally_smooth_hint == SmoothnessHint::No {
        r.annotate("formal_etale", NOT_FORMALLY_ETALE);
    }
    r.coherence = coherence_check(&r, true)?;
    r.timings_ms.insert("total".into(), start.elapsed().as_millis() as u64);
    Ok(r)
}

fn kleene_and(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

/// Checks the implications between predicates; a violation is an error.
/// `rosicky` enables the converse `unramified ⟹ immersion`.
pub fn coherence_check(r: &ClassificationReport, rosicky: bool) -> Result<Vec<CoherenceItem>> {
    let v = |k: &str| r.predicates.get(k).and_then(PredicateStatus::value);
    let mut out = Vec::new();
    let mut push = |name: &str, ok: Option<bool>| -> Result<()> {
        match ok {
            Some(false) => Err(Error::InconsistentClassification(format!(
                "`{}` ({} instance) violates {name}",
                r.morphism, r.instance
            ))),
            Some(true) => {
                out.push(CoherenceItem { implication: name.into(), status: "consistent".into() });
                Ok(())
            }
            None => {
                out.push(CoherenceItem { implication: name.into(), status: "not applicable".into() });
                Ok(())
            }
        }
    };
    let iff = |a: Option<bool>, b: Option<bool>| match (a, b) {
        (Some(x), Some(y)) => Some(x == y),
        _ => None,
    };
    let implies = |a: Option<bool>, b: Option<bool>| match (a, b) {
        (Some(true), Some(false)) => Some(false),
        (Some(true), Some(true)) | (Some(false), _) | (_, Some(true)) => Some(true),
        _ => None,
    };
    push(
        "T_etale ⟺ T_immersion ∧ split_T_submersion",
        iff(v("T_etale"), kleene_and(v("T_immersion"), v("split_T_submersion"))),
    )?;
    push("T_etale ⟺ T_submersion ∧ T_immersion", iff(v("T_etale"), kleene_and(v("T_submersion"), v("T_immersion"))))?;
    push(
        "monic_T_etale ⟺ T_monic ∧ split_T_submersion",
        iff(v("monic_T_etale"), kleene_and(v("T_monic"), v("split_T_submersion"))),
    )?;
    push("T_immersion ⟹ T_unramified", implies(v("T_immersion"), v("T_unramified")))?;
    push("split_T_submersion ⟹ T_submersion", implies(v("split_T_submersion"), v("T_submersion")))?;
    if rosicky {
        push("T_unramified ⟹ T_immersion", implies(v("T_unramified"), v("T_immersion")))?;
    }
    Ok(out)
}
