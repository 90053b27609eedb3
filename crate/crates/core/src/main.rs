use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tgc::cli::{exit_code, parse_workspace, run, CliError, Command, Flags, Format, Suite, Workspace};

#[derive(Parser, Debug)]
#[command(name = "tgc", version, about = "Tangent-category classification of morphisms of algebras, affine schemes and polynomial maps")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Corroborate results with randomized identity testing and evidence replay.
    #[arg(long, global = true)]
    oracle: bool,
    /// Exit 4 when any verdict is undetermined.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true, env = "TGC_DEGREE_CAP", default_value_t = tgc::groebner::DEFAULT_DEGREE_CAP)]
    degree_cap: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify a morphism against the seven predicates.
    Classify {
        workspace: PathBuf,
        #[arg(long, value_enum)]
        instance: tgc::cli::InstanceArg,
        #[arg(long, conflicts_with = "structure")]
        morphism: Option<String>,
        /// Classify the structure map of this algebra over its base.
        #[arg(long)]
        structure: Option<String>,
    },
    /// Module of Kähler differentials of an algebra over its base.
    Kahler {
        workspace: PathBuf,
        #[arg(long)]
        algebra: String,
    },
    /// Relative cotangent sequence of a morphism.
    Cotangent {
        workspace: PathBuf,
        #[arg(long)]
        morphism: String,
    },
    /// Polynomial differential-category tools.
    #[command(subcommand)]
    Cdc(CdcCmd),
    /// Run an identity or base-change suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        workspace: Option<PathBuf>,
        /// Additional randomly generated map pairs, seeded by --seed.
        #[arg(long, default_value_t = 10)]
        random: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CdcCmd {
    /// Check the seven axioms at a map (and a second map, identity by default).
    Axioms {
        workspace: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long)]
        with: Option<String>,
    },
    /// Linearize a section of the horizontal descent of a map.
    Linearize {
        workspace: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long)]
        section: String,
    },
}

fn load(path: &PathBuf) -> Result<Workspace, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_workspace(&text)?)
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let g = &cli.global;
    let flags = Flags { format: g.format, oracle: g.oracle, strict: g.strict, degree_cap: g.degree_cap, seed: g.seed };
    let (ws, cmd) = match &cli.command {
        Cmd::Classify { workspace, instance, morphism, structure } => {
            (load(workspace)?, Command::Classify { instance: *instance, morphism: morphism.clone(), structure: structure.clone() })
        }
        Cmd::Kahler { workspace, algebra } => (load(workspace)?, Command::Kahler { algebra: algebra.clone() }),
        Cmd::Cotangent { workspace, morphism } => (load(workspace)?, Command::Cotangent { morphism: morphism.clone() }),
        Cmd::Cdc(CdcCmd::Axioms { workspace, map, with }) => (load(workspace)?, Command::CdcAxioms { map: map.clone(), with: with.clone() }),
        Cmd::Cdc(CdcCmd::Linearize { workspace, map, section }) => {
            (load(workspace)?, Command::CdcLinearize { map: map.clone(), section: section.clone() })
        }
        Cmd::Verify { suite, workspace, random } => {
            let ws = match workspace {
                Some(p) => load(p)?,
                None => Workspace::default(),
            };
            (ws, Command::Verify { suite: *suite, random: *random })
        }
    };
    let out = run(&cmd, &ws, &flags)?;
    print!("{}", out.text);
    if let Some(path) = &g.json {
        let body = serde_json::to_string_pretty(&out.json).expect("json") + "\n";
        std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    if let Some(v) = &out.violation {
        eprintln!("error: {v}");
        return Ok(6);
    }
    Ok(if flags.strict && out.undetermined { 4 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
