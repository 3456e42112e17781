use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::commands::{self, value_name, Concept, DecompositionScheme, Diagram, RayClass};
use crate::error::CliError;
use crate::json::{Outcome, ResultDocument};

/// Exact solution concepts and decompositions for coalitional games.
#[derive(Debug, Parser)]
#[command(name = "tucoop", version)]
pub struct Cli {
    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report every class membership flag with witnesses.
    Classify { file: PathBuf },
    /// Compute a solution concept.
    Solve {
        #[arg(long, value_enum)]
        concept: Concept,
        /// Probabilistic weights file (required for `probabilistic`).
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Allocation set for the nucleolus; defaults to the imputation set.
        #[arg(long)]
        kset: Option<PathBuf>,
        file: PathBuf,
    },
    /// Decompose a game.
    Decompose {
        #[arg(long, value_enum)]
        scheme: DecompositionScheme,
        /// Directory of basis game files for `linear`; defaults to unanimity games.
        #[arg(long)]
        basis: Option<PathBuf>,
        file: PathBuf,
    },
    /// Check that a factorization diagram commutes.
    Verify {
        #[arg(long, value_enum)]
        diagram: Diagram,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        kset: Option<PathBuf>,
        file: PathBuf,
    },
    /// List the extreme rays of a zero-normalized cone.
    Rays {
        #[arg(long = "class", value_enum)]
        class: RayClass,
        #[arg(long)]
        n: usize,
    },
}

fn path(p: &std::path::Path) -> Value {
    json!(p.display().to_string())
}

impl Command {
    fn echo(&self) -> Map<String, Value> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        match self {
            Command::Classify { file } => {
                put("name", json!("classify"));
                put("file", path(file));
            }
            Command::Solve { concept, weights, kset, file } => {
                put("name", json!("solve"));
                put("concept", json!(value_name(concept)));
                if let Some(w) = weights {
                    put("weights", path(w));
                }
                if let Some(k) = kset {
                    put("kset", path(k));
                }
                put("file", path(file));
            }
            Command::Decompose { scheme, basis, file } => {
                put("name", json!("decompose"));
                put("scheme", json!(value_name(scheme)));
                if let Some(b) = basis {
                    put("basis", path(b));
                }
                put("file", path(file));
            }
            Command::Verify { diagram, weights, kset, file } => {
                put("name", json!("verify"));
                put("diagram", json!(value_name(diagram)));
                if let Some(w) = weights {
                    put("weights", path(w));
                }
                if let Some(k) = kset {
                    put("kset", path(k));
                }
                put("file", path(file));
            }
            Command::Rays { class, n } => {
                put("name", json!("rays"));
                put("class", json!(value_name(class)));
                put("n", json!(n));
            }
        }
        m
    }

    fn execute(&self) -> Result<Value, CliError> {
        match self {
            Command::Classify { file } => commands::cmd_classify(file),
            Command::Solve { concept, weights, kset, file } => {
                commands::cmd_solve(file, *concept, weights.as_deref(), kset.as_deref())
            }
            Command::Decompose { scheme, basis, file } => commands::cmd_decompose(file, *scheme, basis.as_deref()),
            Command::Verify { diagram, weights, kset, file } => {
                commands::cmd_verify(file, *diagram, weights.as_deref(), kset.as_deref())
            }
            Command::Rays { class, n } => commands::cmd_rays(*class, *n),
        }
    }
}

/// Runs one invocation and returns the process exit code: 0 on success, 2 on
/// domain errors, 1 on parse, IO and usage errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let out: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let result = cli.command.execute();
    let (outcome, code) = match result {
        Ok(v) => (Outcome::Ok(v), 0),
        Err(e) => {
            let _ = writeln!(stderr, "error [{}]: {e}", e.code());
            let code = e.exit_code();
            (Outcome::Error { code: e.code().to_string(), message: e.to_string(), exit_code: code }, code)
        }
    };
    let text = ResultDocument { command: cli.command.echo(), outcome }.render();
    let written = match &cli.output {
        Some(p) => fs::write(p, &text).map_err(|e| CliError::io(p, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io { path: "<stdout>".into(), source: e }),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error [{}]: {e}", e.code());
            1
        }
    }
}
