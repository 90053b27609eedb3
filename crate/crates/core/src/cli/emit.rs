use std::fmt::Write;

use crate::classify::{ClassificationReport, Evidence, PREDICATES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
}

/// JSON (pretty, deterministic key order) or the fixed-width table.
pub fn emit_report(report: &ClassificationReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Human => human_table(report),
    }
}

fn evidence_summary(e: &Evidence) -> String {
    match e {
        Evidence::KernelElements { generators, .. } => {
            format!("kernel contains {}", generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "))
        }
        Evidence::MissingPreimage { variable, .. } => format!("{variable} has no preimage"),
        Evidence::SectionWitness { witness, .. } => format!("section witness a = {witness}"),
        Evidence::ModuleKernelElement { element, .. } => {
            format!("v kills ({})", element.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "))
        }
        Evidence::CokernelGenerator { generator, .. } => format!("{generator} survives in the cokernel"),
        Evidence::MatrixRank { rank, rows, cols, .. } => format!("rank {rank} of {rows}×{cols}"),
        Evidence::Determinant { value } => format!("det = {value}"),
        Evidence::ZeroColumn { column } => format!("column {column} is zero"),
        Evidence::NoRightInverse { reason } | Evidence::SectionInfeasible { reason, .. } => reason.clone(),
        Evidence::RetractionInfeasible { reason, .. } => reason.clone(),
        Evidence::Derived { from } => from.join(", "),
        other => other.kind().replace('_', " "),
    }
}

/// Header row of the seven predicate names, a status row, then details.
pub fn human_table(r: &ClassificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "instance: {}   morphism: {}   base: {}", r.instance, r.morphism, r.base);
    let widths: Vec<usize> = PREDICATES.iter().map(|p| p.chars().count().max(12)).collect();
    let header: Vec<String> = PREDICATES.iter().zip(&widths).map(|(p, w)| format!("{p:<w$}")).collect();
    let _ = writeln!(out, "{}", header.join("  ").trim_end());
    let row: Vec<String> = PREDICATES
        .iter()
        .zip(&widths)
        .map(|(p, w)| format!("{:<w$}", r.predicates.get(p).map(|s| s.status.to_string()).unwrap_or_default()))
        .collect();
    let _ = writeln!(out, "{}", row.join("  ").trim_end());
    out.push('\n');
    for p in PREDICATES {
        if let Some(s) = r.predicates.get(p) {
            let detail = match (&s.evidence, &s.reason) {
                (_, Some(reason)) => format!("reason: {reason}"),
                (Some(e), None) => evidence_summary(e),
                (None, None) => String::new(),
            };
            let _ = writeln!(out, "  {p:<20} {detail}");
        }
    }
    if !r.coherence.is_empty() {
        out.push_str("coherence:\n");
        for c in &r.coherence {
            let _ = writeln!(out, "  {:<50} {}", c.implication, c.status);
        }
    }
    if !r.annotations.is_empty() {
        out.push_str("annotations:\n");
        for a in &r.annotations {
            let _ = writeln!(out, "  {}: {}", a.key, a.value);
        }
    }
    out
}
