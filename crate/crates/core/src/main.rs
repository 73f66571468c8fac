use clap::{Parser, Subcommand};
use monoflow_core::harness::{
    load_config, presets, render_plot, run_experiment, run_suite, PlotOptions, Series, Suite,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "monoflow",
    about = "Evolution schemes for maximal monotone operators on R^d: runs, certificates, plots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file or a named preset.
    Run {
        /// path to a TOML experiment config
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// named built-in preset (see error message for the list)
        #[arg(long)]
        preset: Option<String>,
        /// output directory for CSV / JSON / SVG artifacts
        #[arg(long)]
        out: PathBuf,
        /// override the config seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the acceptance suite and print one line per criterion.
    Check {
        /// "fast" (quick subset) or "full" (all criteria)
        #[arg(long)]
        suite: String,
    },
    /// Render an SVG line plot from an emitted CSV series.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = false)]
        log_x: bool,
        #[arg(long, default_value_t = false)]
        log_y: bool,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode, Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, preset, out, seed } => {
            let (text, name) = match (config, preset) {
                (Some(path), None) => {
                    let name = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "experiment".into());
                    (std::fs::read_to_string(&path)?, name)
                }
                (None, Some(name)) => match presets::preset(&name) {
                    Some(text) => (text.to_string(), name),
                    None => {
                        return Err(format!(
                            "unknown preset {name:?}; available: {}",
                            presets::PRESET_NAMES.join(", ")
                        )
                        .into())
                    }
                },
                _ => return Err("provide exactly one of --config or --preset".into()),
            };
            let mut config = load_config(&text)?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let artifacts = run_experiment(&config, &name, &out)?;
            if let Some(report) = &artifacts.convergence {
                println!("verdict: {:?}", report.verdict);
                println!("average verdict: {:?}", report.average_verdict);
            }
            for cert in &artifacts.certificates {
                println!(
                    "certificate {}: {} (min margin {:.3e}, slack {:.1e})",
                    cert.name,
                    if cert.passed { "pass" } else { "FAIL" },
                    cert.min_margin,
                    cert.slack
                );
            }
            for path in artifacts
                .series_path
                .iter()
                .chain(artifacts.report_path.iter())
                .chain(artifacts.plot_paths.iter())
            {
                println!("wrote {}", path.display());
            }
            println!("wall clock: {:.3}s", artifacts.wall_clock.as_secs_f64());
            let ok = artifacts.certificates.iter().all(|c| c.passed);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Check { suite } => {
            let Some(suite) = Suite::parse(&suite) else {
                return Err(format!("unknown suite {suite:?}; use \"fast\" or \"full\"").into());
            };
            let summary = run_suite(suite);
            for line in summary.render_lines() {
                println!("{line}");
            }
            Ok(if summary.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Plot { csv, x, y, out, log_x, log_y } => {
            let series = Series::from_csv(&std::fs::read_to_string(&csv)?)?;
            let title = csv
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let svg = render_plot(&series, &x, &y, &title, PlotOptions { log_x, log_y })?;
            std::fs::write(&out, svg)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
