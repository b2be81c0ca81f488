use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use orbit_embed::{Mode, Tolerances};
use orbit_embed_cli::commands::{self, Output};
use orbit_embed_cli::config::{Format, NRange, Overrides, SuiteConfig};
use orbit_embed_cli::instance::read_json;
use orbit_embed_cli::CliError;

#[derive(Parser)]
#[command(
    name = "orbit-embed",
    version,
    about = "Orbit embedding checks for the enhanced symplectic Lie algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (default json).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Arithmetic mode for generated instances; instance files carry their own.
    #[arg(long, global = true)]
    mode: Option<Mode>,
    /// Residual tolerance; the verification tolerance is ten times this.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SuiteArgs {
    /// n or lo..hi.
    #[arg(long)]
    n: Option<NRange>,
    /// Trials per property and per n.
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Restrict to these properties (repeatable).
    #[arg(long = "property")]
    properties: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every property at the configured scale.
    Verify(SuiteArgs),
    /// Extract a symplectic witness from an instance file.
    Witness { file: PathBuf },
    /// Search a conjugator in the full or block-diagonal group.
    Conjugate { file: PathBuf },
    /// Tabulate Gamma_k of the element "X" in a file.
    Invariants {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Reproduce the GL2 case study.
    CaseGl2,
    /// Seeded fuzzing; prints only failures. With --replay, re-evaluates dumps.
    Fuzz {
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long)]
        replay: Option<PathBuf>,
    },
}

fn suite_config(cli: &Cli, args: &SuiteArgs, default_trials: u64) -> Result<SuiteConfig, CliError> {
    let base = match &args.config {
        Some(path) => SuiteConfig::load(path)?,
        None => SuiteConfig {
            trials: default_trials,
            ..SuiteConfig::default()
        },
    };
    base.apply(&Overrides {
        n: args.n,
        trials: args.trials,
        seed: args.seed,
        mode: cli.mode,
        tol: cli.tol,
        format: cli.format,
        properties: args.properties.clone(),
    })
}

fn tolerances(cli: &Cli) -> Result<Tolerances, CliError> {
    match cli.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::Input(format!("--tol must be positive, got {t}"))),
        Some(t) => Ok(Tolerances::with_residual(t)),
        None => Ok(Tolerances::default()),
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let format = cli.format.unwrap_or(Format::Json);
    let timed = |config: &SuiteConfig, f: fn(&SuiteConfig) -> Output| {
        let start = Instant::now();
        let out = f(config);
        // wall time stays out of the report so identical configs give identical output
        eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
        out
    };
    match &cli.command {
        Command::Verify(args) => Ok(timed(&suite_config(cli, args, 10)?, commands::verify)),
        Command::Fuzz { replay: Some(path), .. } => commands::replay(&read_json(path)?, format),
        Command::Fuzz { suite, replay: None } => Ok(timed(&suite_config(cli, suite, 100)?, commands::fuzz)),
        Command::Witness { file } => commands::witness(&read_json(file)?, &tolerances(cli)?, format),
        Command::Conjugate { file } => commands::conjugate(&read_json(file)?, &tolerances(cli)?, format),
        Command::Invariants { file, k_max } => commands::invariants(&read_json(file)?, *k_max, format),
        Command::CaseGl2 => commands::case_gl2(format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("orbit-embed: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
