//! `cellres` command line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cellres::Field;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "cellres", version, about = "Cohen-Macaulay monomial labellings of cell complexes")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Coefficient field for homology: gf2, gf<p> or rational.
    #[arg(long, global = true, default_value = "gf2")]
    pub field: Field,
    /// Worker threads for searches.
    #[arg(long, global = true, env = "CELLRES_JOBS")]
    pub jobs: Option<usize>,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a complex, family or labelling, or list the fixture catalogue.
    Construct(commands::ConstructArgs),
    /// Decide whether a labelling (or family) gives a CM cellular resolution.
    Verify(commands::VerifyArgs),
    /// Enumerate valid or maximal families.
    Enumerate(commands::EnumerateArgs),
    /// Test whether a valid family is maximal.
    MaximalCheck(commands::MaximalArgs),
    /// Reduced homology of a complex or one of its restrictions.
    Homology(commands::HomologyArgs),
    /// Ranks and graded Betti numbers of the cellular free complex.
    Betti(commands::BettiArgs),
    /// Morphism and refinement relation between two families.
    Morphism(commands::MorphismArgs),
    /// Standard polarization of a labelling.
    Polarize(commands::PolarizeArgs),
    /// Gather evidence for one of the open conjectures.
    Conjecture(commands::ConjectureArgs),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Guard(_) => 2,
            CliError::Input(_) | CliError::Io { .. } => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Guard(_) => "guard",
            CliError::Input(_) => "input",
            CliError::Io { .. } => "io",
        }
    }
}

/// The payload of a finished command.
pub struct Outcome {
    pub result: Value,
    /// The verification came out negative (exit code 1).
    pub negative: bool,
    pub inputs: Vec<(String, PathBuf, String)>,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Construct(_) => "construct",
        Command::Verify(_) => "verify",
        Command::Enumerate(_) => "enumerate",
        Command::MaximalCheck(_) => "maximal-check",
        Command::Homology(_) => "homology",
        Command::Betti(_) => "betti",
        Command::Morphism(_) => "morphism",
        Command::Polarize(_) => "polarize",
        Command::Conjecture(_) => "conjecture",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.common.jobs {
        // a second initialisation only happens in tests and is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    let name = command_name(&cli.command);
    let start = Instant::now();
    match commands::run(&cli.command, &cli.common) {
        Ok(outcome) => {
            let inputs: serde_json::Map<String, Value> = outcome
                .inputs
                .iter()
                .map(|(role, path, hash)| (role.clone(), json!({ "path": path.display().to_string(), "sha256": hash })))
                .collect();
            let mut report = json!({
                "command": name,
                "version": env!("CARGO_PKG_VERSION"),
                "field": cli.common.field.to_string(),
                "inputs": inputs,
                "result": outcome.result,
            });
            if cli.common.timing {
                report["wall_time_s"] = json!(start.elapsed().as_secs_f64());
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            if outcome.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let err = json!({ "command": name, "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{}", serde_json::to_string_pretty(&err).expect("error serializes"));
            ExitCode::from(e.exit_code())
        }
    }
}
