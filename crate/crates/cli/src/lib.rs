//! Command-line driver: parses arguments, runs one subcommand and writes its
//! report.
//!
//! Exit codes: 0 success, 2 configuration error, 3 internal invariant
//! violation.

mod consensus;
mod feasibility;
mod neuron;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use amn_core::feasibility::{DeviceProfile, TimingModel};
use amn_core::neuron::DiffusionMode;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "amn", version, about = "Associative measuring neuron simulator")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Seed for every random draw; required by commands that sample.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value = "paper")]
    pub timing_model: TimingModel,
    /// Overrides the diffusion mode from the config.
    #[arg(long, global = true)]
    pub diffusion: Option<DiffusionMode>,
    /// Device profile JSON; the bundled Melbourne profile when absent.
    #[arg(long, global = true)]
    pub profile: Option<PathBuf>,
    /// Omit the generation timestamp so reruns are byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one neuron from a JSON config.
    Neuron(neuron::NeuronArgs),
    /// Run consensus rounds on a network config.
    Consensus(consensus::ConsensusArgs),
    /// Participant bounds and repetition ranges for given T2 values.
    Feasibility(feasibility::FeasibilityArgs),
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
        }
    }
}

impl From<amn_core::Error> for CliError {
    fn from(e: amn_core::Error) -> Self {
        match e {
            amn_core::Error::Config(_) | amn_core::Error::Routing { .. } => CliError::Config(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub(crate) fn load_profile(common: &CommonArgs) -> CliResult<DeviceProfile> {
    match &common.profile {
        Some(p) => Ok(DeviceProfile::from_json(&read_file(p)?)?),
        None => Ok(DeviceProfile::default()),
    }
}

pub(crate) fn require_seed(common: &CommonArgs, what: &str) -> CliResult<u64> {
    common
        .seed
        .ok_or_else(|| CliError::Config(format!("{what} samples and needs --seed")))
}

/// Runs the parsed command and returns its report.
pub fn run(cli: &Cli) -> CliResult<Report> {
    if let Some(out) = &cli.common.out {
        let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
        if let Some(dir) = parent {
            if !dir.is_dir() {
                return Err(CliError::Config(format!("output directory {} does not exist", dir.display())));
            }
        }
    }
    let mut report = match &cli.command {
        Command::Neuron(args) => neuron::run(args, &cli.common)?,
        Command::Consensus(args) => consensus::run(args, &cli.common)?,
        Command::Feasibility(args) => feasibility::run(args, &cli.common)?,
    };
    if !cli.common.deterministic {
        report.stamp();
    }
    Ok(report)
}

/// Full entry point: parses `args`, runs, writes the report to `--out` or
/// `stdout`, and returns the process exit code. Diagnostics go to `stderr`.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    let result = run(&cli).and_then(|report| {
        let text = report.render(cli.common.format)?;
        match &cli.common.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display()))),
            None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Config(e.to_string())),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "amn: {e}");
            e.exit_code()
        }
    }
}
