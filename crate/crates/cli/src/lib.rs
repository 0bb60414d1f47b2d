//! Command-line front end: spectra, δ-sweeps, cross-route verification,
//! eigenvalue tables and supplementary representations.
//!
//! Exit codes: 0 success, 2 configuration or output error, 3 numerical
//! failure, 4 verification failure.

pub mod codec;
pub mod commands;
pub mod config;

use std::io::Write;

use config::{Command, Parsed, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot write output: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(lmg_core::Error),
    #[error("verification failed: {message}")]
    Verification { report: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification { .. } => 4,
        }
    }

    pub(crate) fn io(e: impl std::fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<lmg_core::Error> for CliError {
    fn from(e: lmg_core::Error) -> Self {
        use lmg_core::Error as E;
        match e {
            E::NoConvergence { .. } | E::NegativeProduct { .. } | E::IncompatibleConstraints(_) => {
                CliError::Numerical(e)
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Output text of one command.
pub fn execute(cfg: &RunConfig) -> Result<String, CliError> {
    match cfg.command {
        Command::Spectrum => commands::cmd_spectrum(cfg),
        Command::Sweep => commands::cmd_sweep(cfg),
        Command::Verify => commands::cmd_verify(cfg),
        Command::Table => commands::cmd_table(cfg),
        Command::Supplementary => commands::cmd_supplementary(cfg),
    }
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::io),
    }
}

/// Parses `args`, runs the command, writes output and returns the exit code.
///
/// A failed verification still writes its report before reporting failure.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::from_args(args) {
        Ok(Parsed::Run(cfg)) => cfg,
        Ok(Parsed::Info(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            return 0;
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let result = match execute(&cfg) {
        Ok(text) => emit(&cfg, &text, stdout),
        Err(CliError::Verification { report, message }) => {
            emit(&cfg, &report, stdout).and(Err(CliError::Verification { report: String::new(), message }))
        }
        Err(e) => Err(e),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
