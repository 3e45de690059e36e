use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use selforg::sweep::{execute_sweep, parse_config, refine_threshold, render_csv};
use selforg::Error;

/// Ground state, excitation spectrum, and matter-light entanglement of
/// a pumped condensate coupled to one cavity mode.
#[derive(Parser)]
#[command(name = "selforg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the sweep described by a config file and write the dataset
    Run {
        /// Path to the TOML run configuration
        config: PathBuf,
        /// Output prefix for the CSV (defaults to the config path minus its extension)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Only refine the transition point over the sweep range
        #[arg(long)]
        threshold: bool,
        /// Suppress the summary on stdout
        #[arg(long)]
        quiet: bool,
    },
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::NoConvergence { .. } | Error::BracketFailure { .. } => 2,
        Error::UnstableCavity { .. }
        | Error::DegenerateGap { .. }
        | Error::DynamicalInstability { .. }
        | Error::EigenNoConvergence { .. } => 3,
        Error::InvalidParameter(_) | Error::Config(_) => 4,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err((code, message)) => {
            eprintln!("{message}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, (u8, String)> {
    let Command::Run { config: config_path, out, threshold, quiet } = cli.command;
    let text = fs::read_to_string(&config_path)
        .map_err(|e| (4u8, format!("cannot read {}: {e}", config_path.display())))?;
    let config = parse_config(&text).map_err(|e| (4u8, e.to_string()))?;

    if threshold {
        let value = refine_threshold(&config).map_err(|e| (exit_for(&e), e.to_string()))?;
        println!("threshold {value:.12}");
        return Ok(ExitCode::SUCCESS);
    }

    let (records, summary) = execute_sweep(&config).map_err(|e| (exit_for(&e), e.to_string()))?;
    let csv = render_csv(&config, &records);
    let prefix = out
        .or_else(|| config.out.clone().map(PathBuf::from))
        .unwrap_or_else(|| config_path.with_extension(""));
    let path = PathBuf::from(format!("{}.csv", prefix.display()));
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| (1u8, format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(&path, &csv).map_err(|e| (1u8, format!("cannot write {}: {e}", path.display())))?;

    if !quiet {
        println!(
            "wrote {} ({} of {} points)",
            path.display(),
            summary.completed,
            summary.requested
        );
        if let Some(t) = summary.threshold {
            println!("threshold {t:.12}");
        }
        if let Some(g) = summary.goldstone {
            println!(
                "phase variance growth at {}: coefficient {:.6e}, timescale {:.6e}",
                g.swept, g.coefficient, g.timescale
            );
        }
        if let Some(reason) = &summary.stopped {
            println!("stopped early: {reason}");
        }
        if summary.no_converge > 0 {
            println!("{} points did not converge", summary.no_converge);
        }
    }

    let code = if summary.stopped.is_some() {
        3
    } else if summary.no_converge > 0 {
        2
    } else {
        0
    };
    Ok(ExitCode::from(code))
}
