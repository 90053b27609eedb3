use std::time::Instant;

use num_traits::{One, Signed, Zero};

use super::CdcMap;
use crate::classify::{and, coherence_check, ClassificationReport, Evidence, Instance, MatrixData, PredicateStatus};
use crate::error::{Error, Result};
use crate::modlin::ExactMatrix;
use crate::polycore::CoefficientDomain;

pub const NONLINEAR_UNDECIDED: &str = "nonlinear injectivity undecided";
pub const NATURALS_OUT_OF_SCOPE: &str = "ℕ right-inverse search out of scope";

/// Linear-fragment classifier for `x ↦ M x`, `M` an `m × n` matrix.
pub fn classify_linear(name: &str, m: &ExactMatrix) -> Result<ClassificationReport> {
    let start = Instant::now();
    let domain = m.domain();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut r = ClassificationReport::new(Instance::CdcLinear, name, domain.to_string());
    let rank = m.rank();
    let rank_ev = || Evidence::MatrixRank { rank, rows, cols, field: rational_field(domain) };
    let injective = PredicateStatus::decided(rank == cols, rank_ev());

    let (unramified, split) = match domain {
        CoefficientDomain::Rationals | CoefficientDomain::PrimeField(_) => {
            let split = match m.right_inverse()? {
                Some(x) => PredicateStatus::holds(Evidence::RightInverse { matrix: MatrixData(x), original: Some(m.clone()) }),
                None => PredicateStatus::fails(Evidence::NoRightInverse { reason: format!("rank {rank} < {rows} rows") }),
            };
            (injective.clone(), split)
        }
        CoefficientDomain::Integers => {
            let split = match m.integer_right_inverse()? {
                Some(x) => PredicateStatus::holds(Evidence::RightInverse { matrix: MatrixData(x), original: Some(m.clone()) }),
                None => PredicateStatus::fails(Evidence::NoRightInverse { reason: "M·X = I has no integer solution".into() }),
            };
            (injective.clone(), split)
        }
        CoefficientDomain::Naturals => {
            let zero_col = (0..cols).find(|&j| (0..rows).all(|i| m.get(i, j).is_zero()));
            let unramified = match zero_col {
                Some(j) => PredicateStatus::fails(Evidence::ZeroColumn { column: j }),
                None => PredicateStatus::holds(Evidence::NoZeroColumn { cols }),
            };
            (unramified, PredicateStatus::undetermined(NATURALS_OUT_OF_SCOPE))
        }
    };
    let etale = match domain {
        CoefficientDomain::Naturals => PredicateStatus::undetermined(NATURALS_OUT_OF_SCOPE),
        _ if rows != cols => PredicateStatus::fails(Evidence::MatrixRank { rank, rows, cols, field: rational_field(domain) }),
        _ => {
            let det = m.determinant()?;
            let ok = match domain {
                CoefficientDomain::Integers => det.abs().is_one(),
                _ => !det.is_zero(),
            };
            PredicateStatus::decided(ok, Evidence::Determinant { value: det.to_string() })
        }
    };
    r.set("T_monic", injective.clone());
    r.set("T_immersion", injective.clone());
    r.set("T_unramified", unramified);
    r.set("T_submersion", split.clone());
    r.set("monic_T_etale", and(&injective, &split, ("T_monic", "split_T_submersion")));
    r.set("split_T_submersion", split);
    r.set("T_etale", etale);
    r.coherence = coherence_check(&r, domain.has_negation())?;
    r.timings_ms.insert("total".into(), start.elapsed().as_millis() as u64);
    Ok(r)
}

fn rational_field(domain: CoefficientDomain) -> String {
    match domain {
        CoefficientDomain::PrimeField(_) => domain.to_string(),
        _ => "Q".into(),
    }
}

/// Classifies a CDC map: linear maps by their matrix, others left undetermined.
pub fn classify_cdc_map(f: &CdcMap) -> Result<ClassificationReport> {
    match f.matrix() {
        Some(rows) => {
            let m = ExactMatrix::from_rows(f.domain(), f.arity(), rows)
                .map_err(|e| Error::ShapeMismatch(format!("matrix of `{}`: {e}", f.name())))?;
            classify_linear(f.name(), &m)
        }
        None => {
            let mut r = ClassificationReport::new(Instance::CdcLinear, f.name(), f.domain().to_string());
            for k in crate::classify::PREDICATES {
                r.set(k, PredicateStatus::undetermined(NONLINEAR_UNDECIDED));
            }
            r.coherence = coherence_check(&r, f.domain().has_negation())?;
            Ok(r)
        }
    }
}
