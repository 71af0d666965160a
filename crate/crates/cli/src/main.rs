//! `coherence`: sweeps, detection reports and oracle cross-checks.

mod commands;
mod config;
mod error;
mod format;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coherence_core::G3Kind;

use crate::commands::Report;
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "coherence",
    version,
    about = "Multi-time coherence of coupled optical and matter-wave modes"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; overrides the config's `output`. Defaults to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true, env = "COHERENCE_THREADS", value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of the drift matrix.
    Eig,
    /// Stationary pair covariance C(tau, 0).
    Covariance {
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
    },
    /// Normalized third-order correlation over the configured grid.
    G3 {
        /// Overrides the config's `kind`.
        #[arg(long)]
        kind: Option<G3Kind>,
    },
    /// Gate ordering and contribution terms of the detector plan.
    Gating,
    /// Contribution coefficients from the configured efficiencies.
    Terms,
    /// Gaussian engine against the truncated-Fock oracle.
    OracleCheck {
        #[arg(long)]
        kind: Option<G3Kind>,
    },
}

fn run(cli: Cli) -> Result<Option<CliError>, CliError> {
    let path = cli
        .config
        .ok_or_else(|| CliError::Usage("--config <PATH> is required".into()))?;
    let cfg = RunConfig::load(&path)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;

    let report: Report = pool.install(|| match cli.command {
        Command::Eig => commands::eig(&cfg),
        Command::Covariance { tau } => commands::covariance(&cfg, tau),
        Command::G3 { kind } => commands::g3(&cfg, kind.unwrap_or(cfg.kind)),
        Command::Gating => commands::gating(&cfg),
        Command::Terms => commands::terms(&cfg),
        Command::OracleCheck { kind } => commands::oracle_check(&cfg, kind.unwrap_or(cfg.kind)),
    })?;

    match cli.out.or_else(|| cfg.output.clone()) {
        Some(out) => std::fs::write(&out, &report.body).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(report.body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    Ok(report.alarm)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.diagnostic());
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help, --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return fail(&CliError::Usage(first.trim_start_matches("error: ").to_string()));
        }
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(alarm)) => fail(&alarm),
        Err(e) => fail(&e),
    }
}
