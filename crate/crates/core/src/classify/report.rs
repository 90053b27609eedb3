use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::groebner::ModuleGroebnerBasis;
use crate::modlin::ExactMatrix;
use crate::polycore::{CoefficientDomain, Polynomial, VariableContext};

/// The seven predicate keys, in the row order of the comparison table.
pub const PREDICATES: [&str; 7] = [
    "T_monic",
    "T_immersion",
    "T_unramified",
    "T_submersion",
    "split_T_submersion",
    "T_etale",
    "monic_T_etale",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Undetermined,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Undetermined => "undetermined",
        })
    }
}

/// Data for re-checking ring-level witnesses by substitution and division.
#[derive(Clone, Debug, PartialEq)]
pub struct RingReplay {
    pub domain: CoefficientDomain,
    pub source_ctx: Arc<VariableContext>,
    pub target_ctx: Arc<VariableContext>,
    /// Images of every flattened source variable.
    pub images: Vec<Polynomial>,
    /// Reduced grevlex bases of the two ideals.
    pub source_gb: Vec<Polynomial>,
    pub target_gb: Vec<Polynomial>,
}

/// Data for re-checking module-level witnesses (`v: M → N` over `B`).
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleReplay {
    /// Basis of `L_M + I_B·B^s`.
    pub source_gb: ModuleGroebnerBasis,
    /// Basis of `L_N + I_B·B^t`.
    pub target_gb: ModuleGroebnerBasis,
    /// `v(e_i)` for each source generator.
    pub columns: Vec<Vec<Polynomial>>,
    /// Relations of `N`.
    pub target_relations: Vec<Vec<Polynomial>>,
}

/// A matrix shown as strings, kept exact for replay.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixData(pub ExactMatrix);

impl Serialize for MatrixData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.0.rows().iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// Replayable witness attached to a decided predicate.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Nonzero kernel elements of a ring map.
    KernelElements {
        generators: Vec<Polynomial>,
        #[serde(skip)]
        replay: Option<Arc<RingReplay>>,
    },
    /// The elimination ideal has no source-only element beyond the source relations.
    KernelTrivial { eliminated_basis_size: usize },
    /// Source preimage of every target variable.
    Preimages {
        preimages: BTreeMap<String, Polynomial>,
        #[serde(skip)]
        replay: Option<Arc<RingReplay>>,
    },
    MissingPreimage { variable: String, normal_form: String },
    /// `a` with `f(a) = 1` and `a·Ker f = 0`.
    SectionWitness {
        witness: Polynomial,
        kernel: Vec<Polynomial>,
        #[serde(skip)]
        replay: Option<Arc<RingReplay>>,
    },
    SectionInfeasible { kernel: Vec<Polynomial>, reason: String },
    /// `x ∈ M`, nonzero, with `v(x) = 0` in `N`.
    ModuleKernelElement {
        element: Vec<Polynomial>,
        #[serde(skip)]
        replay: Option<Arc<ModuleReplay>>,
    },
    ModuleKernelTrivial { method: String, dim_source: Option<usize>, rank: Option<usize> },
    /// A target generator that survives in the cokernel.
    CokernelGenerator { generator: String, normal_form: Vec<Polynomial> },
    CokernelTrivial { generators: usize },
    /// Images `r(e'_j)` of a retraction of `v`.
    Retraction {
        images: Vec<Vec<Polynomial>>,
        #[serde(skip)]
        replay: Option<Arc<ModuleReplay>>,
    },
    RetractionInfeasible { unknowns: usize, equations: usize, reason: String },
    MatrixRank { rank: usize, rows: usize, cols: usize, field: String },
    RightInverse {
        matrix: MatrixData,
        #[serde(skip)]
        original: Option<ExactMatrix>,
    },
    NoRightInverse { reason: String },
    Determinant { value: String },
    ZeroColumn { column: usize },
    NoZeroColumn { cols: usize },
    /// A predicate obtained from others.
    Derived { from: Vec<String> },
}

impl Evidence {
    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::KernelElements { .. } => "kernel_elements",
            Evidence::KernelTrivial { .. } => "kernel_trivial",
            Evidence::Preimages { .. } => "preimages",
            Evidence::MissingPreimage { .. } => "missing_preimage",
            Evidence::SectionWitness { .. } => "section_witness",
            Evidence::SectionInfeasible { .. } => "section_infeasible",
            Evidence::ModuleKernelElement { .. } => "module_kernel_element",
            Evidence::ModuleKernelTrivial { .. } => "module_kernel_trivial",
            Evidence::CokernelGenerator { .. } => "cokernel_generator",
            Evidence::CokernelTrivial { .. } => "cokernel_trivial",
            Evidence::Retraction { .. } => "retraction",
            Evidence::RetractionInfeasible { .. } => "retraction_infeasible",
            Evidence::MatrixRank { .. } => "matrix_rank",
            Evidence::RightInverse { .. } => "right_inverse",
            Evidence::NoRightInverse { .. } => "no_right_inverse",
            Evidence::Determinant { .. } => "determinant",
            Evidence::ZeroColumn { .. } => "zero_column",
            Evidence::NoZeroColumn { .. } => "no_zero_column",
            Evidence::Derived { .. } => "derived",
        }
    }
}

/// Verdict plus witness (decided) or reason (undetermined).
#[derive(Clone, Debug, PartialEq)]
pub struct PredicateStatus {
    pub status: Status,
    pub evidence: Option<Evidence>,
    pub reason: Option<String>,
}

impl PredicateStatus {
    pub fn holds(evidence: Evidence) -> Self {
        PredicateStatus { status: Status::Holds, evidence: Some(evidence), reason: None }
    }

    pub fn fails(evidence: Evidence) -> Self {
        PredicateStatus { status: Status::Fails, evidence: Some(evidence), reason: None }
    }

    pub fn decided(value: bool, evidence: Evidence) -> Self {
        if value {
            Self::holds(evidence)
        } else {
            Self::fails(evidence)
        }
    }

    pub fn undetermined(reason: impl Into<String>) -> Self {
        PredicateStatus { status: Status::Undetermined, evidence: None, reason: Some(reason.into()) }
    }

    pub fn value(&self) -> Option<bool> {
        match self.status {
            Status::Holds => Some(true),
            Status::Fails => Some(false),
            Status::Undetermined => None,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }
}

impl Serialize for PredicateStatus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = if self.reason.is_some() { 3 } else { 2 };
        let mut st = s.serialize_struct("PredicateStatus", n)?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("evidence", &self.evidence)?;
        if let Some(r) = &self.reason {
            st.serialize_field("reason", r)?;
        }
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Instance {
    #[serde(rename = "calg")]
    Calg,
    #[serde(rename = "affine")]
    Affine,
    #[serde(rename = "cdc-linear")]
    CdcLinear,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Instance::Calg => "calg",
            Instance::Affine => "affine",
            Instance::CdcLinear => "cdc-linear",
        })
    }
}

/// One checked implication between predicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceItem {
    pub implication: String,
    /// "consistent" or "not applicable".
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Annotation {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub instance: Instance,
    pub morphism: String,
    pub base: String,
    pub predicates: BTreeMap<&'static str, PredicateStatus>,
    pub coherence: Vec<CoherenceItem>,
    pub annotations: Vec<Annotation>,
    pub timings_ms: BTreeMap<String, u64>,
}

impl ClassificationReport {
    pub fn new(instance: Instance, morphism: impl Into<String>, base: impl Into<String>) -> Self {
        ClassificationReport {
            instance,
            morphism: morphism.into(),
            base: base.into(),
            predicates: BTreeMap::new(),
            coherence: Vec::new(),
            annotations: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn get(&self, key: &str) -> &PredicateStatus {
        self.predicates.get(key).unwrap_or_else(|| panic!("predicate {key} missing"))
    }

    pub fn status(&self, key: &str) -> Status {
        self.get(key).status
    }

    pub fn set(&mut self, key: &str, status: PredicateStatus) {
        let k = PREDICATES.iter().find(|p| **p == key).unwrap_or_else(|| panic!("unknown predicate {key}"));
        self.predicates.insert(k, status);
    }

    pub fn annotate(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.annotations.push(Annotation { key: key.into(), value: value.into() });
    }

    pub fn annotation(&self, key: &str) -> Option<&str> {
        self.annotations.iter().find(|a| a.key == key).map(|a| a.value.as_str())
    }
}

impl Serialize for ClassificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // predicates in table order rather than alphabetical
        struct Ordered<'a>(&'a BTreeMap<&'static str, PredicateStatus>);
        impl Serialize for Ordered<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for k in PREDICATES {
                    if let Some(v) = self.0.get(k) {
                        m.serialize_entry(k, v)?;
                    }
                }
                m.end()
            }
        }
        let mut st = s.serialize_struct("ClassificationReport", 8)?;
        st.serialize_field("schema_version", "1")?;
        st.serialize_field("instance", &self.instance)?;
        st.serialize_field("morphism", &self.morphism)?;
        st.serialize_field("base", &self.base)?;
        st.serialize_field("predicates", &Ordered(&self.predicates))?;
        st.serialize_field("coherence", &self.coherence)?;
        st.serialize_field("annotations", &self.annotations)?;
        st.serialize_field("timings_ms", &self.timings_ms)?;
        st.end()
    }
}
