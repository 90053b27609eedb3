//! Coefficient domains, monomials and orders, exact multivariate polynomials.

mod domain;
mod monomial;
mod parse;
mod poly;

pub use domain::{is_prime_u64, residue_mod, Coeff, CoefficientDomain};
pub(crate) use domain::mod_inverse;
pub use monomial::{Monomial, TermOrder, VariableContext};
pub use parse::{parse_polynomial, PolyParseError};
pub use poly::{formal_partial, poly_add, poly_eval, poly_mul, Polynomial};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials live in different variable contexts")]
    ContextMismatch,
    #[error("coefficient domains differ: {0} vs {1}")]
    DomainMismatch(CoefficientDomain, CoefficientDomain),
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {0} out of range for {1} variables")]
    IndexOutOfRange(usize, usize),
    #[error("negation is not available over the naturals")]
    NegationUnsupported,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an element of {1}")]
    NotInDomain(String, String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable blocks do not partition the context")]
    BadBlocks,
}
