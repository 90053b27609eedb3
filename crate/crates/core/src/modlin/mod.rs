//! Exact linear algebra: matrices over ℚ, `F_p` and ℤ, staircase bases of
//! finite-dimensional algebras and modules, and retraction solving.

mod fd;
mod matrix;

pub use fd::{fd_basis, require_fd_basis, retraction_solve, FdBasis, FdModuleBasis, Regime};
pub use matrix::ExactMatrix;

use crate::error::Result;
use crate::polycore::Coeff;

/// Some `x` with `m · x = b` over the ambient field.
pub fn solve(m: &ExactMatrix, b: &[Coeff]) -> Result<Option<Vec<Coeff>>> {
    m.solve(b)
}

#[cfg(test)]
mod tests;
