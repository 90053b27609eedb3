use thiserror::Error;

use crate::groebner::GroebnerError;
use crate::polycore::{CoefficientDomain, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("ill-defined morphism `{morphism}`: relation {relation} maps to {normal_form}, which is nonzero in the target")]
    IllDefinedMorphism { morphism: String, relation: String, normal_form: String },
    #[error("morphism `{morphism}` is not surjective: {variable} has no preimage")]
    NotSurjective { morphism: String, variable: String },
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("operation needs a field or a ring with negation, not {0}")]
    UnsupportedDomain(CoefficientDomain),
    #[error("not finite-dimensional: {0}")]
    NotFiniteDimensional(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("inconsistent classification: {0}")]
    InconsistentClassification(String),
    #[error("evidence mismatch: {0}")]
    EvidenceMismatch(String),
    #[error("cannot embed coefficients modulo the oracle prime: {0}")]
    EmbeddingFailure(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::Groebner(GroebnerError::ResourceLimit(_)))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
