//! Batch front end: validation, bracket evaluation, structure probes and
//! realization cross-checks, each producing a JSON report that embeds the
//! manifest of the run.

pub mod commands;
pub mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::Section;
pub use manifest::RunManifest;

/// Exit code for malformed command lines, kept apart from the 1/2 codes
/// that carry validation outcomes.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Engine {
        path: String,
        #[source]
        source: Box<blockforge_core::Error>,
    },

    #[error(transparent)]
    Bracket(Box<blockforge_core::Error>),

    #[error(transparent)]
    Realize(Box<blockforge_realize::RealizeError>),

    #[error("{0}")]
    Usage(String),
}

impl From<blockforge_core::Error> for CliError {
    fn from(e: blockforge_core::Error) -> Self {
        CliError::Bracket(Box::new(e))
    }
}

impl From<blockforge_realize::RealizeError> for CliError {
    fn from(e: blockforge_realize::RealizeError) -> Self {
        CliError::Realize(Box::new(e))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "blockforge", version, about = "Exact computations in generalized Block Lie (super)algebras")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every hypothesis of the configuration's class.
    Validate { config: PathBuf },

    /// Bracket two element files under a configuration.
    Bracket { config: PathBuf, u: PathBuf, v: PathBuf },

    /// Jacobi suite, centers, derived algebra and ideal closures on a window.
    Probe {
        config: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "K"], default_values_t = [3, 2])]
        window: Vec<u32>,
        /// Random closure seeds; 0 skips the closure section.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of jacobi,centers,derived,closure.
        #[arg(long, value_delimiter = ',')]
        sections: Option<Vec<Section>>,
    },

    /// Compare the engine with a polynomial realization on random pairs.
    RealizeCheck {
        spec: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Combine reports into one document.
    Report {
        #[arg(long, num_args = 1.., required = true)]
        merge: Vec<PathBuf>,
    },
}

/// What a command produced: the text to emit and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    /// One-line summary for standard error.
    pub summary: String,
}

/// Caps rayon's global pool at `BLOCKFORGE_THREADS` when set.
pub fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var("BLOCKFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize =
        value.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            CliError::Usage(format!("BLOCKFORGE_THREADS must be a positive integer, found {value:?}"))
        })?;
    // A second initialization in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs one parsed command, writing the report to `--out` if given.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let out = cli.out.as_ref().map(|p| p.display().to_string());
    let outcome = match &cli.command {
        Command::Validate { config } => commands::validate(config, out)?,
        Command::Bracket { config, u, v } => commands::bracket(config, u, v)?,
        Command::Probe { config, window, trials, seed, sections } => {
            let window = blockforge_core::Window::new(window[0], window[1]);
            let sections = sections.clone().unwrap_or_else(|| Section::ALL.to_vec());
            commands::probe(config, window, *trials, *seed, &sections, out)?
        }
        Command::RealizeCheck { spec, trials, seed } => commands::realize_check(spec, *trials, *seed, out)?,
        Command::Report { merge } => commands::merge(merge, out)?,
    };
    if let Some(path) = &cli.out {
        std::fs::write(path, &outcome.output)
            .map_err(|source| CliError::Write { path: path.display().to_string(), source })?;
    }
    Ok(outcome)
}

/// Parses `args` (program name first) and runs the command. Reports go to
/// `--out` or are returned for standard output; errors map to exit code 1.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, output: String::new(), summary: text }
            } else {
                Outcome { code: 0, output: text, summary: String::new() }
            };
        }
    };
    let to_stdout = cli.out.is_none();
    if let Err(e) = init_threads() {
        return Outcome { code: 1, output: String::new(), summary: format!("error: {e}") };
    }
    match execute(&cli) {
        Ok(mut o) if !to_stdout => {
            o.output.clear();
            o
        }
        Ok(o) => o,
        Err(e) => Outcome { code: 1, output: String::new(), summary: format!("error: {e}") },
    }
}
