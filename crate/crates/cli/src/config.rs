use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lmg_core::fock::DEFAULT_MAX_PARTICLES;
use lmg_core::Half;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "lmg", version, about = "Exact spectra of the Lipkin-Meshkov-Glick model")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Full spectrum with degeneracies and (j, J, c) labels.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Block eigenvalues over a grid of delta values.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        delta_min: f64,
        #[arg(long)]
        delta_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare brute force, multiplet blocks and split blocks for N = 1..=n-max.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Single strength to test instead of the default 0, 1, 3.
        #[arg(long)]
        delta: Option<f64>,
        /// Brute-force ceiling on N.
        #[arg(long, default_value_t = DEFAULT_MAX_PARTICLES)]
        fock_limit: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalues per (j, J) with closed forms where known.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Admissible stride-1 representations of one sector and their spectra.
    Supplementary {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: Half,
        #[arg(long)]
        j_max: Half,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report absolute energies for this level splitting.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Sweep,
    Verify,
    Table,
    Supplementary,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeltaSpec {
    Single(f64),
    Range { min: f64, max: f64, steps: usize },
    Points(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Units {
    Epsilon,
    Absolute(f64),
}

impl Units {
    pub fn factor(&self) -> f64 {
        match self {
            Units::Epsilon => 1.0,
            Units::Absolute(e) => *e,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Units::Epsilon => "epsilon",
            Units::Absolute(_) => "absolute",
        }
    }
}

/// A validated command line.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `N`, or the largest `N` for `verify`.
    pub n_particles: usize,
    pub delta: DeltaSpec,
    pub tolerance: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub units: Units,
    pub j: Option<Half>,
    pub j_max: Option<Half>,
    pub fock_limit: usize,
    pub inject_fault: bool,
}

/// Result of parsing: either a config to run, or text clap wants printed
/// (help, version) with success.
#[derive(Debug)]
pub enum Parsed {
    Run(RunConfig),
    Info(String),
}

fn check_delta(name: &str, d: f64) -> Result<(), CliError> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(CliError::Config(format!("--{name} must be a finite value >= 0, got {d}")));
    }
    Ok(())
}

impl RunConfig {
    /// Parses and validates `args`, the first of which is the program name.
    pub fn from_args<I, T>(args: I) -> Result<Parsed, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = match Cli::try_parse_from(args) {
            Ok(cli) => cli,
            Err(e) => {
                use clap::error::ErrorKind;
                return match e.kind() {
                    ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Info(e.to_string())),
                    _ => Err(CliError::Config(e.to_string())),
                };
            }
        };
        Self::from_cli(cli).map(Parsed::Run)
    }

    fn from_cli(cli: Cli) -> Result<RunConfig, CliError> {
        let base = |command, n_particles, delta, out: OutputArgs| -> Result<RunConfig, CliError> {
            let units = match out.epsilon {
                None => Units::Epsilon,
                Some(e) if e.is_finite() && e > 0.0 => Units::Absolute(e),
                Some(e) => return Err(CliError::Config(format!("--epsilon must be positive, got {e}"))),
            };
            if n_particles == 0 {
                return Err(CliError::Config("particle number must be >= 1".into()));
            }
            Ok(RunConfig {
                command,
                n_particles,
                delta,
                tolerance: 1e-9,
                format: out.format,
                out: out.out,
                units,
                j: None,
                j_max: None,
                fock_limit: DEFAULT_MAX_PARTICLES,
                inject_fault: false,
            })
        };
        match cli.command {
            Sub::Spectrum { n, delta, out } => {
                check_delta("delta", delta)?;
                base(Command::Spectrum, n, DeltaSpec::Single(delta), out)
            }
            Sub::Sweep { n, delta_min, delta_max, steps, out } => {
                check_delta("delta-min", delta_min)?;
                check_delta("delta-max", delta_max)?;
                if delta_min > delta_max {
                    return Err(CliError::Config(format!("--delta-min {delta_min} exceeds --delta-max {delta_max}")));
                }
                if steps == 0 {
                    return Err(CliError::Config("--steps must be >= 1".into()));
                }
                if out.format != OutputFormat::Csv {
                    return Err(CliError::Config("sweep only writes csv".into()));
                }
                base(Command::Sweep, n, DeltaSpec::Range { min: delta_min, max: delta_max, steps }, out)
            }
            Sub::Verify { n_max, tol, delta, fock_limit, inject_fault, out } => {
                if !(tol.is_finite() && tol > 0.0) {
                    return Err(CliError::Config(format!("--tol must be positive, got {tol}")));
                }
                if out.epsilon.is_some() {
                    return Err(CliError::Config("verify compares reduced energies; --epsilon does not apply".into()));
                }
                if n_max > fock_limit {
                    return Err(CliError::Config(format!(
                        "--n-max {n_max} exceeds the brute-force ceiling {fock_limit}"
                    )));
                }
                let deltas = match delta {
                    Some(d) => {
                        check_delta("delta", d)?;
                        vec![d]
                    }
                    None => vec![0.0, 1.0, 3.0],
                };
                let mut cfg = base(Command::Verify, n_max, DeltaSpec::Points(deltas), out)?;
                cfg.tolerance = tol;
                cfg.fock_limit = fock_limit;
                cfg.inject_fault = inject_fault;
                Ok(cfg)
            }
            Sub::Table { n, delta, out } => {
                check_delta("delta", delta)?;
                base(Command::Table, n, DeltaSpec::Single(delta), out)
            }
            Sub::Supplementary { n, j, j_max, delta, out } => {
                check_delta("delta", delta)?;
                if j_max.twice() < 0 {
                    return Err(CliError::Config(format!("--j-max must be >= 0, got {j_max}")));
                }
                let mut cfg = base(Command::Supplementary, n, DeltaSpec::Single(delta), out)?;
                cfg.j = Some(j);
                cfg.j_max = Some(j_max);
                Ok(cfg)
            }
        }
    }

    pub fn single_delta(&self) -> f64 {
        match &self.delta {
            DeltaSpec::Single(d) => *d,
            DeltaSpec::Range { min, .. } => *min,
            DeltaSpec::Points(p) => p.first().copied().unwrap_or(0.0),
        }
    }
}
