//! Command-line front end. All file output lives here.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod commands;
mod record;

use std::path::{Path, PathBuf};
use std::time::SystemTime;

use clap::{Args, Parser, Subcommand};

pub use record::{fmt_f64, RunRecord, Timing};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that caps the number of worker threads.
pub const THREADS_ENV: &str = "NS_FORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ns-forge", version, about = "Heralded atom-cavity nonlinear-sign gate synthesis")]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    /// Re-run the command stored in a JSON run record and compare payloads.
    #[arg(long, value_name = "RECORD")]
    pub replay: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dense one-atom scan (or two-atom search with --atoms 2).
    Scan(SearchArgs),
    /// Annealing-ensemble search followed by simplex polishing.
    Optimize(SearchArgs),
    /// Gate amplitudes and figures of merit for given interaction times.
    Eval(EvalArgs),
    /// Recompute the published solution tables.
    VerifyTables(VerifyArgs),
    /// Coincidence curve of the calibration interferometer.
    Calibrate(CalibrateArgs),
    /// Coupling constant and laboratory interaction times.
    Units(UnitsArgs),
    /// Compare closed-form evolution against dense matrix exponentiation.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the full run record as JSON ("-" for stdout).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write a CSV table ("-" for stdout).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Number of atoms (1 or 2).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub atoms: Option<u8>,
    /// Atomic preparations, e.g. "g,e".
    #[arg(long)]
    pub prep: Option<String>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Grid spacing of the one-atom scan.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub ensemble_size: Option<usize>,
    /// Initial annealing temperature.
    #[arg(long)]
    pub t0: Option<f64>,
    /// Cooling factor per temperature level.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Initial proposal width.
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long)]
    pub t_floor: Option<f64>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Weight of the (1 - |A_0|)^2 term in the objective.
    #[arg(long)]
    pub weight: Option<f64>,
    /// What the simplex stage minimizes: pattern-match or objective.
    #[arg(long)]
    pub refine: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Interaction time of one atom; repeat for a sequence.
    #[arg(long = "tau", required = true, allow_hyphen_values = true)]
    pub taus: Vec<f64>,
    /// Atomic preparations, e.g. "g,e". Defaults to g, then e.
    #[arg(long)]
    pub prep: Option<String>,
    /// Input amplitudes "c0,c1,c2" (complex entries like 0.5+0.1i allowed).
    #[arg(long, allow_hyphen_values = true)]
    pub amps: Option<String>,
    #[arg(long)]
    pub weight: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Replace every per-row tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Add this offset to every published interaction time.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    /// Single ideal phase, e.g. "pi" or "pi/2".
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Heralded gate in the arm; repeat for a sequence.
    #[arg(long = "tau", conflicts_with = "theta")]
    pub taus: Vec<f64>,
    #[arg(long)]
    pub prep: Option<String>,
    /// Sweep a single ground-state atom over "lo:hi".
    #[arg(long, conflicts_with_all = ["theta", "taus"])]
    pub sweep_tau: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct UnitsArgs {
    /// One-photon Rabi frequency (rad/s, or "2pi*<Hz>").
    #[arg(long, default_value = "2pi*4.5e6")]
    pub g: String,
    /// Raman Rabi frequency.
    #[arg(long, default_value = "2pi*30e6")]
    pub omega: String,
    /// Detuning.
    #[arg(long, default_value = "2pi*6e6")]
    pub delta: String,
    /// Read bare numbers as Hz instead of rad/s.
    #[arg(long)]
    pub hz: bool,
    #[arg(long = "tau")]
    pub taus: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long = "tau", allow_hyphen_values = true)]
    pub taus: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Errors surfaced to the command line.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_FAILED,
        }
    }
}

/// Result of one command before anything is written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: RunRecord,
    pub summary: String,
    pub csv: Option<String>,
    pub exit: i32,
}

fn output_of(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Scan(a) | Command::Optimize(a) => &a.output,
        Command::Eval(a) => &a.output,
        Command::VerifyTables(a) => &a.output,
        Command::Calibrate(a) => &a.output,
        Command::Units(a) => &a.output,
        Command::OracleCheck(a) => &a.output,
    }
}

/// Runs a parsed command and returns its record, without writing files.
pub fn execute(cmd: &Command, argv: &[String]) -> Result<Outcome, CliError> {
    let started = SystemTime::now();
    let mut outcome = match cmd {
        Command::Scan(a) => commands::search(a, 1, argv)?,
        Command::Optimize(a) => commands::search(a, 2, argv)?,
        Command::Eval(a) => commands::eval(a, argv)?,
        Command::VerifyTables(a) => commands::verify(a, argv)?,
        Command::Calibrate(a) => commands::calibrate(a, argv)?,
        Command::Units(a) => commands::units(a, argv)?,
        Command::OracleCheck(a) => commands::oracle_check(a, argv)?,
    };
    outcome.record.timing = Timing::since(started);
    Ok(outcome)
}

fn write_outputs(out: &OutputArgs, outcome: &Outcome) -> Result<(), CliError> {
    let stdout = Some(Path::new("-"));
    let (json_out, csv_out) = (out.json.as_deref() == stdout, out.csv.as_deref() == stdout);
    if json_out && csv_out {
        return Err(CliError::Usage("only one of --json and --csv can go to stdout".into()));
    }
    if !json_out && !csv_out {
        print!("{}", outcome.summary);
    }
    if let Some(path) = &out.json {
        let text = outcome.record.to_json();
        if json_out {
            println!("{text}");
        } else {
            std::fs::write(path, text + "\n")?;
        }
    }
    if let (Some(path), Some(csv)) = (&out.csv, &outcome.csv) {
        if csv_out {
            print!("{csv}");
        } else {
            std::fs::write(path, csv)?;
        }
    }
    Ok(())
}

fn replay(path: &Path) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path)?;
    let recorded: RunRecord =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: not a run record: {e}", path.display())))?;
    let mut argv = vec!["ns-forge".to_string()];
    argv.extend(recorded.command.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(e.to_string()))?;
    let cmd = cli.command.ok_or_else(|| CliError::Usage("record holds no command".into()))?;
    let again = execute(&cmd, &recorded.command)?;
    if again.record.payload == recorded.payload && again.record.config == recorded.config {
        println!("replay of {}: payload reproduced exactly", path.display());
        Ok(EXIT_OK)
    } else {
        println!("replay of {}: payload differs from the recording", path.display());
        Ok(EXIT_FAILED)
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

fn dispatch(cli: Cli, argv: &[String]) -> Result<i32, CliError> {
    let pool = thread_pool()?;
    if let Some(path) = &cli.replay {
        return pool.install(|| replay(path));
    }
    let Some(cmd) = cli.command else {
        return Err(CliError::Usage("no command given, see --help".into()));
    };
    let outcome = pool.install(|| execute(&cmd, argv))?;
    write_outputs(output_of(&cmd), &outcome)?;
    Ok(outcome.exit)
}

/// Entry point for the binary; `args` includes the program name.
pub fn run(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli, &args[1.min(args.len())..]) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
