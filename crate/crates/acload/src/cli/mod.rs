//! Batch command implementations: validate, run, and top.
//!
//! Exit-code contract: 0 success, 1 validation failure, 2 I/O failure,
//! 3 internal invariant violation. Machine-readable output goes to the
//! writer handed in (standard output in the binary); logs go to standard
//! error.

pub mod output;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::demand::{cell_demand, national_demand, CellDemandSeries, TemperatureSeries};
use crate::demographics::distribute;
use crate::geo::WeatherStation;
use crate::ingest::{
    load_census, load_config, load_weather, CensusError, ConfigError, RunConfig, WeatherError,
};
use crate::presence::{PresenceError, PresenceProfile};
use crate::stats::{hourly_distribution, relative_increase, top_cells};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// Presence override paths are relative to the config file's directory.
fn resolve_presence(config_path: &Path, presence: &Path) -> PathBuf {
    if presence.is_absolute() {
        presence.to_path_buf()
    } else {
        config_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(presence)
    }
}

fn config_code(e: &ConfigError) -> &'static str {
    match e {
        ConfigError::UnknownKey(_) => "UnknownKey",
        ConfigError::InvalidValue { .. } => "InvalidValue",
        ConfigError::Syntax(_) => "Syntax",
    }
}

fn census_code(e: &CensusError) -> &'static str {
    match e {
        CensusError::BadHeader { .. } => "BadHeader",
        CensusError::MalformedRow { .. } => "MalformedRow",
        CensusError::DuplicateGridId(_) => "DuplicateGridId",
        CensusError::InvalidCoordinate { .. } => "InvalidCoordinate",
        CensusError::Io(_) => "Io",
    }
}

fn weather_code(e: &WeatherError) -> &'static str {
    match e {
        WeatherError::BadHeader { .. } => "BadHeader",
        WeatherError::MalformedRow { .. } => "MalformedRow",
        WeatherError::MalformedTimestamp { .. } => "MalformedTimestamp",
        WeatherError::DuplicateReading { .. } => "DuplicateReading",
        WeatherError::InconsistentStation { .. } => "InconsistentStation",
        WeatherError::MissingHours { .. } => "MissingHours",
        WeatherError::Io(_) => "Io",
    }
}

fn presence_code(e: &PresenceError) -> &'static str {
    match e {
        PresenceError::MissingHour { .. } => "MissingHour",
        PresenceError::MissingGroup(_) => "MissingGroup",
        PresenceError::UnknownGroup { .. } => "UnknownGroup",
        PresenceError::DuplicateGroup { .. } => "DuplicateGroup",
        PresenceError::ValueOutOfRange { .. } => "ValueOutOfRange",
        PresenceError::Malformed { .. } => "Malformed",
        PresenceError::Io(_) => "Io",
    }
}

#[derive(Serialize)]
struct CheckReport {
    name: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    code: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl CheckReport {
    fn ok(name: &'static str) -> Self {
        Self {
            name,
            status: "ok",
            code: None,
            detail: None,
        }
    }

    fn ok_detail(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: "ok",
            code: None,
            detail: Some(detail.into()),
        }
    }

    fn failed(name: &'static str, code: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: "failed",
            code: Some(code),
            detail: Some(detail.into()),
        }
    }

    fn skipped(name: &'static str) -> Self {
        Self {
            name,
            status: "skipped",
            code: None,
            detail: Some("earlier check failed".to_string()),
        }
    }
}

#[derive(Serialize)]
struct ValidationReport {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stations: Option<usize>,
    checks: Vec<CheckReport>,
}

/// Validate all inputs and print a JSON report. Unreadable files are I/O
/// failures; content problems are collected into the report.
pub fn cmd_validate(
    census_path: &Path,
    weather_path: &Path,
    config_path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let config_text = read_text(config_path)?;
    let census_bytes = read_bytes(census_path)?;
    let weather_bytes = read_bytes(weather_path)?;

    let mut checks = Vec::new();

    let config = match load_config(&config_text) {
        Ok(c) => {
            checks.push(CheckReport::ok("config"));
            Some(c)
        }
        Err(e) => {
            checks.push(CheckReport::failed("config", config_code(&e), e.to_string()));
            None
        }
    };

    let cells = match load_census(census_bytes.as_slice()) {
        Ok(c) => {
            checks.push(CheckReport::ok("census"));
            Some(c)
        }
        Err(e) => {
            checks.push(CheckReport::failed("census", census_code(&e), e.to_string()));
            None
        }
    };

    let stations = match &config {
        Some(c) => match load_weather(weather_bytes.as_slice(), c.date, c.utc_offset_hours) {
            Ok(s) => {
                checks.push(CheckReport::ok("weather"));
                Some(s)
            }
            Err(e) => {
                checks.push(CheckReport::failed("weather", weather_code(&e), e.to_string()));
                None
            }
        },
        None => {
            checks.push(CheckReport::skipped("weather"));
            None
        }
    };

    checks.push(match &config {
        Some(c) if c.matrix.is_some() => CheckReport::ok_detail("matrix", "override valid"),
        Some(_) => CheckReport::ok_detail("matrix", "using default table"),
        None => CheckReport::skipped("matrix"),
    });

    match &config {
        Some(c) => match &c.presence_path {
            Some(p) => {
                let resolved = resolve_presence(config_path, p);
                let bytes = read_bytes(&resolved)?;
                checks.push(match PresenceProfile::<f64>::from_csv_reader(bytes.as_slice()) {
                    Ok(_) => CheckReport::ok_detail("presence", "override valid"),
                    Err(e) => {
                        CheckReport::failed("presence", presence_code(&e), e.to_string())
                    }
                });
            }
            None => checks.push(CheckReport::ok_detail("presence", "using default table")),
        },
        None => checks.push(CheckReport::skipped("presence")),
    }

    checks.push(match (&cells, &stations) {
        (Some(c), Some(s)) if c.is_empty() || s.is_empty() => CheckReport::failed(
            "coverage",
            "Empty",
            format!(
                "{} cells, {} stations; both must be non-empty",
                c.len(),
                s.len()
            ),
        ),
        (Some(_), Some(_)) => CheckReport::ok("coverage"),
        _ => CheckReport::skipped("coverage"),
    });

    let all_ok = checks.iter().all(|c| c.status != "failed");
    let report = ValidationReport {
        status: if all_ok { "ok" } else { "failed" },
        cells: cells.as_ref().map(Vec::len),
        stations: stations.as_ref().map(Vec::len),
        checks,
    };
    let mut text =
        serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
    text.push('\n');
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))?;

    if all_ok {
        Ok(())
    } else {
        Err(CliError::Validation("validation failed".to_string()))
    }
}

pub struct RunArgs<'a> {
    pub census: &'a Path,
    pub weather: &'a Path,
    pub config: &'a Path,
    pub out_dir: &'a Path,
    /// Worker threads for the cell loop; 0 picks the machine default.
    pub threads: usize,
    /// Overrides the config's baseline when set.
    pub baseline_gw: Option<f64>,
}

fn config_echo(config: &RunConfig) -> output::ConfigEcho {
    output::ConfigEcho {
        date: config.date.format("%Y-%m-%d").to_string(),
        utc_offset_hours: config.utc_offset_hours,
        baseline_gw: config.baseline_gw,
        p_max_kw: config.scenario.unit_power_kw(),
        eta: config.scenario.adoption_rate(),
        dt_hours: config.scenario.step_hours(),
        activation: output::ActivationEcho {
            threshold_c: config.activation.threshold_c(),
            scale_c: config.activation.scale_c(),
            shape: config.activation.shape(),
            dt_hours: config.activation.step_hours(),
            time_constant_hours: config.activation.time_constant_hours(),
        },
        matrix_override: config.matrix.is_some(),
        presence_override: config.presence_path.is_some(),
    }
}

/// Full pipeline: ingest, assign stations, simulate all cells in parallel,
/// aggregate, and write result artifacts. Prints the summary to `out`.
///
/// All outputs except the manifest's wall-clock field are byte-identical for
/// identical inputs, independent of the thread count.
pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let started = Instant::now();
    let config_text = read_text(args.config)?;
    let census_bytes = read_bytes(args.census)?;
    let weather_bytes = read_bytes(args.weather)?;

    let mut config =
        load_config(&config_text).map_err(|e| CliError::Validation(e.to_string()))?;
    if let Some(gw) = args.baseline_gw {
        if !(gw > 0.0 && gw.is_finite()) {
            return Err(CliError::Validation(format!(
                "--baseline-gw {gw} must be positive"
            )));
        }
        config.baseline_gw = Some(gw);
    }

    let mut presence_bytes: Option<Vec<u8>> = None;
    let profile = match &config.presence_path {
        Some(p) => {
            let resolved = resolve_presence(args.config, p);
            let bytes = read_bytes(&resolved)?;
            let profile = PresenceProfile::<f64>::from_csv_reader(bytes.as_slice())
                .map_err(|e| {
                    CliError::Validation(format!("presence file {}: {e}", resolved.display()))
                })?;
            presence_bytes = Some(bytes);
            profile
        }
        None => PresenceProfile::default(),
    };

    let cells =
        load_census(census_bytes.as_slice()).map_err(|e| CliError::Validation(e.to_string()))?;
    if cells.is_empty() {
        return Err(CliError::Validation("census contains no cells".to_string()));
    }
    let weather = load_weather(weather_bytes.as_slice(), config.date, config.utc_offset_hours)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let stations: Vec<WeatherStation<f64>> =
        weather.iter().map(|w| w.station.clone()).collect();
    let assignment = crate::geo::assign_stations(&cells, &stations)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let temps: BTreeMap<&str, &TemperatureSeries<f64>> = weather
        .iter()
        .map(|w| (w.station.id.as_str(), &w.temps))
        .collect();
    let matrix = config.matrix.clone().unwrap_or_default();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Internal(format!("cannot build thread pool: {e}")))?;
    eprintln!(
        "simulating {} cells against {} stations",
        cells.len(),
        stations.len()
    );
    let series: Vec<CellDemandSeries<f64>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let station_id = assignment.station_for(&cell.id).ok_or_else(|| {
                    CliError::Internal(format!("cell {} missing from station assignment", cell.id))
                })?;
                let station_temps = temps.get(station_id).ok_or_else(|| {
                    CliError::Internal(format!(
                        "assigned station {station_id} has no temperature series"
                    ))
                })?;
                let demo = distribute(cell, &matrix);
                Ok(cell_demand(
                    &demo,
                    &profile,
                    &config.activation,
                    station_temps,
                    &config.scenario,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;

    // Census loading sorts and dedups ids, so a failure here is a bug.
    let national = national_demand(&series).map_err(|e| CliError::Internal(e.to_string()))?;
    let distribution =
        hourly_distribution(&series).map_err(|e| CliError::Internal(e.to_string()))?;
    let (peak_hour, peak_kwh) = national.peak();
    let peak_gw = peak_kwh / config.scenario.step_hours() / 1e6;
    let relative_pct = config
        .baseline_gw
        .map(|baseline| relative_increase(peak_gw, baseline))
        .transpose()
        .map_err(|e| CliError::Validation(e.to_string()))?;

    fs::create_dir_all(args.out_dir).map_err(|e| {
        CliError::Io(format!("cannot create {}: {e}", args.out_dir.display()))
    })?;
    output::write_cells_csv(args.out_dir, &series)?;
    output::write_national_csv(args.out_dir, &national)?;
    let summary = output::Summary::new(peak_hour, peak_gw, relative_pct, &distribution);
    output::write_summary_json(args.out_dir, &summary)?;
    output::write_geojson(args.out_dir, &cells, &series)?;
    let manifest = output::Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: output::ManifestInputs {
            census_sha256: sha256_hex(&census_bytes),
            weather_sha256: sha256_hex(&weather_bytes),
            config_sha256: sha256_hex(config_text.as_bytes()),
            presence_sha256: presence_bytes.as_deref().map(sha256_hex),
        },
        config: config_echo(&config),
        cells: cells.len(),
        stations: stations.len(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    output::write_manifest(args.out_dir, &manifest)?;

    eprintln!(
        "run finished in {:.3}s; results in {}",
        started.elapsed().as_secs_f64(),
        args.out_dir.display()
    );
    out.write_all(summary.render().as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

/// Print the top `n` cells by demand at `hour` from an existing results
/// directory, as `rank,grid_id,value_kwh` CSV.
pub fn cmd_top(
    results_dir: &Path,
    hour: usize,
    n: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if hour >= crate::presence::HOURS {
        return Err(CliError::Validation(format!("hour {hour} outside [0, 23]")));
    }
    if n == 0 {
        return Err(CliError::Validation("top cell count must be at least 1".to_string()));
    }
    let series = output::read_cells_csv(&results_dir.join(output::CELLS_FILE))?;
    if series.is_empty() {
        return Err(CliError::Validation("results contain no cells".to_string()));
    }
    let ranked = top_cells(&series, hour, n);
    let write_error = |e: std::io::Error| CliError::Io(e.to_string());
    writeln!(out, "rank,grid_id,value_kwh").map_err(write_error)?;
    for (index, (id, value)) in ranked.iter().enumerate() {
        writeln!(out, "{},{id},{value}", index + 1).map_err(write_error)?;
    }
    Ok(())
}
