use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cvfb_cli::{apply_overrides, parse_config, parse_sweep_arg, run_scenario, RunError, Scenario};
use cvfb_core::ScenarioConfig;

/// Frequency-domain simulator of entangled light through a lossy sample
/// under coherent feedback.
#[derive(Debug, Parser)]
#[command(name = "cvfb", version)]
struct Args {
    /// One of: source, open-loop, feedback-eot, detuning-sweep,
    /// reflectivity-sweep, cavity-scan, snl, correct-detection, calibrate,
    /// optimize-detuning.
    scenario: String,
    /// Config document (TOML sections); defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; standard output if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override one key after the config is read, e.g. `sample.r=0.2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Replace the sweep section: `key=from:to:steps`.
    #[arg(long, value_name = "KEY=FROM:TO:STEPS")]
    sweep: Option<String>,
    /// Worker threads for sweep points.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Omit the timestamp so identical inputs give byte-identical output.
    #[arg(long)]
    deterministic: bool,
}

fn run(args: Args) -> Result<(), RunError> {
    let scenario: Scenario = args.scenario.parse()?;
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                RunError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_config(&text)?
        }
        None => ScenarioConfig::default(),
    };
    cfg = apply_overrides(cfg, &args.sets)?;
    if let Some(s) = &args.sweep {
        cfg.sweep = Some(parse_sweep_arg(s)?);
    }
    let table = run_scenario(scenario, &cfg, args.jobs as usize, args.deterministic)?;
    match &args.output {
        Some(path) => table.write_csv_file(path)?,
        None => table.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
