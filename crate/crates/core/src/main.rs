use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use roughwave::cli::{self, Command, ExperimentConfig};
use roughwave::Error;

/// Experiment runner for the fractional stochastic wave equation toolkit.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// validate | moments | lower | holder | threshold | lemmas | identity
    command: Option<String>,
    /// Flat `key = value` experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report file; defaults to `$ROUGHWAVE_OUT_DIR/<command>.<format>`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// Extra `key=value` overrides, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build_config(args: &Args) -> Result<ExperimentConfig, Error> {
    let mut map = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Input(format!("{}: {e}", p.display())))?;
            cli::parse_pairs(&text)?
        }
        None => Default::default(),
    };
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("--set expects key=value, got '{kv}'")))?;
        cli::insert_pair(&mut map, k.trim(), v.trim())?;
    }
    if let Some(c) = &args.command {
        c.parse::<Command>()?;
        map.insert("command".into(), c.clone());
    }
    if let Some(v) = &args.format {
        map.insert("format".into(), v.clone());
    }
    if let Some(v) = &args.seed {
        map.insert("seed".into(), v.clone());
    }
    if let Some(v) = &args.tol {
        map.insert("tolerance".into(), v.clone());
    }
    if let Some(v) = &args.out {
        map.insert("output".into(), v.display().to_string());
    }
    ExperimentConfig::from_pairs(&map)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}\n");
            eprintln!("{}", Args::command().render_usage());
            return ExitCode::from(cli::EXIT_USAGE as u8);
        }
    };
    match cli::execute(&cfg) {
        Ok((report, path)) => {
            println!("{}: {}", path.display(), report.verdict);
            if report.passed() {
                ExitCode::from(cli::EXIT_OK as u8)
            } else {
                ExitCode::from(cli::EXIT_CERTIFICATE as u8)
            }
        }
        Err(e @ (Error::Domain { .. } | Error::Input(_) | Error::Regime(_))) => {
            eprintln!("error: {e}\n");
            eprintln!("{}", Args::command().render_usage());
            ExitCode::from(cli::EXIT_USAGE as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::EXIT_RUNTIME as u8)
        }
    }
}
