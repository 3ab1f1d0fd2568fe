use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use slipstance_harness::config::ScenarioConfig;
use slipstance_harness::runner::{default_out_dir, run_scenario, RunOverrides, Verdict};
use slipstance_harness::{acceptance, compare, plot, scenarios};
use std::path::PathBuf;
use std::process::ExitCode;

/// Adaptive stance control for quadrupeds on slippery ground: scenario
/// simulations, telemetry and analysis.
#[derive(Parser)]
#[command(name = "slipstance", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write telemetry CSV + summary JSON.
    ///
    /// CONFIG is a TOML file path or the name of a bundled scenario
    /// (scenario1, scenario2, scenario2_noadapt, scenario3,
    /// scenario3_noadapt).
    Run {
        config: String,
        /// Override the RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: $SLIPSTANCE_OUT or ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Disable the weight-adaptation layer.
        #[arg(long)]
        no_layer1: bool,
        /// Disable the time-scaling layer.
        #[arg(long)]
        no_layer2: bool,
    },
    /// Compare two telemetry logs (e.g. with vs without adaptation).
    Compare {
        log_a: PathBuf,
        log_b: PathBuf,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Render SVG plots from a telemetry log.
    Plot {
        log: PathBuf,
        /// Output directory (default: alongside the log).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite; exits nonzero on any criterion failure.
    Accept {
        /// Working directory for the suite's scenario runs
        /// (default: $SLIPSTANCE_OUT or ./out, under accept/).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(spec: &str) -> Result<ScenarioConfig> {
    let path = PathBuf::from(spec);
    if path.exists() {
        return ScenarioConfig::load(&path).context("loading scenario config");
    }
    if let Some(cfg) = scenarios::parse(spec) {
        return Ok(cfg);
    }
    bail!("{spec}: not a file and not a bundled scenario name");
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            no_layer1,
            no_layer2,
        } => {
            let cfg = load_config(&config)?;
            let out_dir = out.unwrap_or_else(default_out_dir);
            let overrides = RunOverrides {
                seed,
                layer1: no_layer1.then_some(false),
                layer2: no_layer2.then_some(false),
            };
            let outcome = run_scenario(&cfg, &out_dir, &overrides)?;
            println!("telemetry: {}", outcome.csv_path.display());
            println!("summary:   {}", outcome.summary_path.display());
            let s = &outcome.summary;
            println!(
                "steps: {}  final |e_p| = {:.6} m  final beta = {:.4}  weights = {:?}",
                s.steps, s.final_position_error, s.final_beta, s.final_weights
            );
            match &s.verdict {
                Verdict::Completed => {
                    println!("verdict: completed");
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Instability { time, reason } => {
                    println!("verdict: instability at t = {time:.3} s — {reason}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Compare { log_a, log_b, json } => {
            let report = compare::compare_runs(&log_a, &log_b)?;
            print!("{}", report.render_text());
            if let Some(path) = json {
                std::fs::write(&path, serde_json::to_string_pretty(&report)?)?;
                println!("json report: {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot { log, out } => {
            let out_dir = out.unwrap_or_else(|| {
                log.parent()
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("."))
            });
            let files = plot::emit_plots(&log, &out_dir)?;
            if files.is_empty() {
                eprintln!(
                    "warning: {} has no data rows; nothing to plot",
                    log.display()
                );
            }
            for f in files {
                println!("{}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Accept { out } => {
            let out_dir = out.unwrap_or_else(|| default_out_dir().join("accept"));
            let results = acceptance::run_all(&out_dir)?;
            let mut all_pass = true;
            for r in &results {
                println!("{}", r.render_line());
                all_pass &= r.passed;
            }
            if all_pass {
                println!("acceptance: all {} criteria passed", results.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("acceptance: FAILURES present");
                Ok(ExitCode::from(1))
            }
        }
    }
}
