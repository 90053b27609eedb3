//! Workspace language, command dispatch and report emission behind the `tgc` binary.

mod emit;
mod run;
mod workspace;

pub use emit::{emit_report, human_table, Format};
pub use run::{exit_code, run, strip_timings, CliError, Command, Flags, InstanceArg, Outcome, Suite};
pub use workspace::{parse_workspace, AlgebraDecl, Location, MorphismDecl, SectionDecl, Workspace, WorkspaceError};

#[cfg(test)]
mod tests;
