use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fmodlen_core::pipeline::{run, PathChoice, ProblemSpec, RunOptions, RunOutcome};

const EXIT_ERROR: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "fmodlen", version, about = "Frobenius-module lengths of local cohomology over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the λ table for a problem file.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Ext,
    Hassewitt,
    Both,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Problem description (JSON).
    input: PathBuf,

    /// Write the JSON report here instead of stdout.
    #[arg(long, conflicts_with = "text")]
    output: Option<PathBuf>,

    /// Human-readable report on stdout.
    #[arg(long)]
    text: bool,

    /// Resolution cache directory.
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// Run the Buchberger S-pair audit on every basis used.
    #[arg(long)]
    audit_groebner: bool,

    /// Wall-clock budget; on overrun a checkpoint is written and the exit
    /// status is 3.
    #[arg(long)]
    budget_seconds: Option<u64>,

    /// Override the computation route from the input file.
    #[arg(long, value_enum)]
    path: Option<PathArg>,

    /// Run the verification checks.
    #[arg(long)]
    verify: bool,

    /// Checkpoint file (default: next to the cache or the input).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

fn default_checkpoint(args: &RunArgs, fingerprint: &str) -> PathBuf {
    match &args.cache_dir {
        Some(dir) => dir.join("checkpoints").join(format!("{fingerprint}.json")),
        None => {
            let mut name = args.input.file_name().map(|s| s.to_os_string()).unwrap_or_default();
            name.push(".checkpoint.json");
            args.input.with_file_name(name)
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run_cmd(args: RunArgs) -> Result<ExitCode, String> {
    let text = fs::read_to_string(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let spec = ProblemSpec::from_json(&text).map_err(|e| e.to_string())?;
    let checkpoint = args.checkpoint.clone().unwrap_or_else(|| default_checkpoint(&args, &spec.fingerprint()));
    let opts = RunOptions {
        cache_dir: args.cache_dir.clone(),
        budget_seconds: args.budget_seconds,
        path: args.path.map(|p| match p {
            PathArg::Ext => PathChoice::Ext,
            PathArg::Hassewitt => PathChoice::Hassewitt,
            PathArg::Both => PathChoice::Both,
        }),
        verify: args.verify,
        audit_groebner: args.audit_groebner,
        checkpoint: Some(checkpoint),
    };
    match run(&spec, &opts).map_err(|e| e.to_string())? {
        RunOutcome::Interrupted { checkpoint, stage } => {
            eprintln!("budget exceeded during {stage}; checkpoint written to {}", checkpoint.display());
            Ok(ExitCode::from(EXIT_BUDGET))
        }
        RunOutcome::Complete(report) => {
            let body = if args.text {
                report.to_text()
            } else {
                serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
            };
            write_out(args.output.as_deref(), &body).map_err(|e| e.to_string())?;
            if report.passed() {
                return Ok(ExitCode::SUCCESS);
            }
            if let Some(t) = &report.verification {
                for c in t.failures() {
                    eprintln!("verification failed: {}: {}", c.name, c.detail);
                }
            }
            Ok(ExitCode::from(EXIT_VERIFY))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_cmd(args),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_ERROR)
    })
}
