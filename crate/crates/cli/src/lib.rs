//! Experiment runner behind the `sim` binary: config ingestion, the
//! experiment registry, the parameter-sweep engine, and deterministic CSV
//! emission.

pub mod config;
pub mod experiments;
pub mod output;
pub mod sweep;

use std::path::{Path, PathBuf};

use config::Config;

/// Environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "SIM_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent configuration (exit code 2).
    Config(String),
    /// A physics-domain failure surfaced from the simulation core
    /// (exit code 3).
    Physics(polsim::Error),
    /// Filesystem trouble (exit code 1).
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Physics(err) => write!(f, "physics error: {err}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<polsim::Error> for CliError {
    fn from(e: polsim::Error) -> Self {
        CliError::Physics(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Run one experiment end to end and return the path of the CSV written.
pub fn run(
    experiment: &str,
    config_path: Option<&Path>,
    out_dir: Option<&Path>,
    threads: usize,
) -> CliResult<PathBuf> {
    let text = match config_path {
        Some(p) => std::fs::read_to_string(p)?,
        None => String::new(),
    };
    let cfg = Config::parse(experiment, &text)?;
    let doc = experiments::run_experiment(&cfg, threads)?;

    let dir = resolve_out_dir(out_dir);
    std::fs::create_dir_all(&dir)?;
    let path = if Path::new(&cfg.output).is_absolute() {
        PathBuf::from(&cfg.output)
    } else {
        dir.join(&cfg.output)
    };
    std::fs::write(&path, doc.to_csv())?;
    Ok(path)
}

fn resolve_out_dir(cli_out: Option<&Path>) -> PathBuf {
    if let Some(p) = cli_out {
        return p.to_path_buf();
    }
    if let Ok(env_dir) = std::env::var(OUT_DIR_ENV) {
        if !env_dir.is_empty() {
            return PathBuf::from(env_dir);
        }
    }
    PathBuf::from(".")
}
