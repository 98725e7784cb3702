use clap::Parser;
use psmom::{run, Kind, RunOptions};
use std::path::PathBuf;
use std::process::ExitCode;

/// Run one experiment and write its CSV outputs and manifest.
///
/// Exit codes: 0 success, 1 verification mismatch, 2 config error,
/// 3 numerical or module error, 4 I/O error.
#[derive(Debug, Parser)]
#[command(name = "psmom", version)]
struct Cli {
    kind: Kind,
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; defaults to PSMOM_WORKERS, then all cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Recompute outputs and compare them with this manifest instead of writing.
    #[arg(long)]
    verify: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = RunOptions { kind: cli.kind, config: cli.config, workers: cli.workers, out: cli.out, verify: cli.verify };
    match run(&options) {
        Ok(outcome) => {
            let what = if options.verify.is_some() { "verified" } else { "wrote" };
            for d in &outcome.manifest.outputs {
                eprintln!("{what} {} {}", d.path, d.sha256);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("psmom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
