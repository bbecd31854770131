//! Batch CLI for the AC demand simulator.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use acload::cli::{cmd_run, cmd_top, cmd_validate, RunArgs};

#[derive(Parser)]
#[command(
    name = "acload",
    version,
    about = "Simulates additional residential electricity demand from mobile AC adoption"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check census, weather, and config inputs; print a JSON report.
    Validate {
        /// Census grid CSV (grid_id,lat,lon,hh_1..hh_6p).
        #[arg(long)]
        census: PathBuf,
        /// Weather readings CSV (station_id,lat,lon,timestamp_utc,temp_c).
        #[arg(long)]
        weather: PathBuf,
        /// Run configuration TOML.
        #[arg(long)]
        config: PathBuf,
    },
    /// Simulate the configured day and write result artifacts.
    Run {
        #[arg(long)]
        census: PathBuf,
        #[arg(long)]
        weather: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Output directory for cells.csv, national.csv, summary.json,
        /// cells.geojson, and manifest.json.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for the cell loop; 0 picks the machine default.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Baseline system load in GW; overrides the config value.
        #[arg(long)]
        baseline_gw: Option<f64>,
    },
    /// Print the highest-demand cells at one hour from an existing run.
    Top {
        /// Results directory produced by `run`.
        #[arg(long)]
        results: PathBuf,
        /// Local hour of day.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=23))]
        hour: u8,
        /// Number of cells to list.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u16).range(1..))]
        n: u16,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Validate {
            census,
            weather,
            config,
        } => cmd_validate(census, weather, config, &mut out),
        Command::Run {
            census,
            weather,
            config,
            out: out_dir,
            threads,
            baseline_gw,
        } => cmd_run(
            &RunArgs {
                census,
                weather,
                config,
                out_dir,
                threads: *threads,
                baseline_gw: *baseline_gw,
            },
            &mut out,
        ),
        Command::Top { results, hour, n } => {
            cmd_top(results, usize::from(*hour), usize::from(*n), &mut out)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(u8::try_from(error.exit_code()).unwrap_or(1))
        }
    }
}
